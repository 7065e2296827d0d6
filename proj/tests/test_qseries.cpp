#include <doctest.h>

#include <random>

#include "hmf/qseries.hpp"

using namespace hmf;

namespace {

QSeries random_series(std::mt19937& rng, long low, long prec) {
  std::uniform_int_distribution<int> d(-9, 9);
  QSeries s(low, prec);
  for (long e = low; e < prec; ++e) s.set(e, make_rat(d(rng), 1 + (d(rng) + 9) % 4));
  if (s.coeff(low) == 0) s.set(low, 1);
  return s;
}

// prod (1 - q^n)^24 by repeated multiplication of polynomials.
std::vector<Int> delta_bruteforce(long n) {
  std::vector<Int> a(n, 0);
  a[0] = 1;
  for (long k = 1; k < n; ++k)
    for (int r = 0; r < 24; ++r)
      for (long e = n - 1; e >= k; --e) a[e] -= a[e - k];
  return a;
}

}  // namespace

TEST_CASE("rationals print and parse canonically") {
  CHECK(rat_str(make_rat(6, -4)) == "-3/2");
  CHECK(rat_str(Rat(7)) == "7");
  CHECK(parse_rat("10/4") == make_rat(5, 2));
  CHECK(parse_rat("-3") == Rat(-3));
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("abc"), Error);
  CHECK_THROWS_AS(parse_rat(""), Error);
}

TEST_CASE("coefficients beyond the precision are unknown") {
  QSeries s(0, 5);
  s.set(3, 2);
  CHECK(s.coeff(4) == 0);
  CHECK_THROWS_AS(s.coeff(5), Error);
  CHECK_THROWS_AS(s.set(7, 1), Error);
  s.set(7, 0);
  CHECK(s.coeffs().size() == 1);
}

TEST_CASE("ring laws on random truncated series") {
  std::mt19937 rng(12345);
  for (int t = 0; t < 20; ++t) {
    QSeries a = random_series(rng, -2, 10), b = random_series(rng, 0, 12), c = random_series(rng, 1, 9);
    CHECK(agree(mul(a, b), mul(b, a)));
    CHECK(agree(mul(mul(a, b), c), mul(a, mul(b, c))));
    CHECK(agree(mul(a, b + c), mul(a, b) + mul(a, c)));
    QSeries one = mul(a, invert_unit(a));
    CHECK(one.coeff(0) == 1);
    for (long e = 1; e < one.prec(); ++e) CHECK(one.coeff(e) == 0);
    CHECK(agree(pow(b, 3), mul(b, mul(b, b))));
    CHECK(agree(pow(a, -2), pow(invert_unit(a), 2)));
  }
}

TEST_CASE("product precision follows the valuations") {
  QSeries a = QSeries::monomial(1, -1, 10), b = QSeries::monomial(1, 2, 8);
  QSeries c = mul(a, b);
  CHECK(c.prec() == 7);
  CHECK(c.coeff(1) == 1);
}

TEST_CASE("shift and scale_arg") {
  QSeries a(0, 4);
  a.set(0, 1);
  a.set(1, 2);
  a.set(3, 5);
  QSeries s = shift(a, -2);
  CHECK(s.low() == -2);
  CHECK(s.coeff(-1) == 2);
  QSeries t = scale_arg(a, 3);
  CHECK(t.prec() == 12);
  CHECK(t.coeff(9) == 5);
  CHECK(t.coeff(4) == 0);
}

TEST_CASE("Delta from the eta quotient matches the naive product") {
  long n = 40;
  QSeries d = level1_form(Level1::Delta, n + 1);
  auto a = delta_bruteforce(n);
  CHECK(d.coeff(0) == 0);
  for (long k = 1; k <= n; ++k) CHECK(d.coeff(k) == Rat(a[k - 1]));
  CHECK(d.coeff(2) == -24);
  CHECK(d.coeff(3) == 252);
}

TEST_CASE("eta quotient offsets") {
  auto e = eta_quotient({{1, 1}}, 5);
  CHECK(e.frac_offset == make_rat(1, 24));
  auto f = eta_quotient({{5, 5}, {1, -1}}, 5);
  CHECK(f.frac_offset == 0);
  CHECK(f.series.low() == 1);
  CHECK(f.series.coeff(1) == 1);
}

TEST_CASE("level one Eisenstein series and j") {
  QSeries e4 = level1_form(Level1::E4, 10), e6 = level1_form(Level1::E6, 10);
  for (long n = 1; n < 10; ++n) {
    CHECK(e4.coeff(n) == 240 * Rat(divisor_sigma(3, n)));
    CHECK(e6.coeff(n) == -504 * Rat(divisor_sigma(5, n)));
  }
  QSeries j = level1_form(Level1::j, 3);
  CHECK(j.coeff(-1) == 1);
  CHECK(j.coeff(0) == 744);
  CHECK(j.coeff(1) == 196884);
  QSeries d = level1_form(Level1::Delta, 12);
  // 1728 Delta = E4^3 - E6^2
  CHECK(agree(1728 * d, pow(e4, 3) - pow(e6, 2)));
}

TEST_CASE("Bernoulli numbers") {
  CHECK(bernoulli(1) == make_rat(-1, 2));
  CHECK(bernoulli(2) == make_rat(1, 6));
  CHECK(bernoulli(12) == make_rat(-691, 2730));
  for (long n = 3; n < 30; n += 2) CHECK(bernoulli(n) == 0);
  // B_n(x + 1) - B_n(x) = n x^(n-1)
  for (long n = 1; n < 12; ++n)
    for (int x = -3; x < 4; ++x) {
      Rat xr = make_rat(x, 3);
      Rat pw = 1;
      for (long i = 0; i < n - 1; ++i) pw *= xr;
      CHECK(bernoulli_poly(n, xr + 1) - bernoulli_poly(n, xr) == n * pw);
    }
}

TEST_CASE("divisor sums") {
  for (long n = 1; n < 60; ++n) {
    Int s = 0;
    for (long d = 1; d <= n; ++d)
      if (n % d == 0) s += d * d;
    CHECK(divisor_sigma(2, n) == s);
  }
}
