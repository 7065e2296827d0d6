#include <doctest.h>

#include <cmath>

#include "hmf/cmvalues.hpp"

using namespace hmf;

namespace {

const std::vector<PlusForm>& basis5() {
  static const std::vector<PlusForm> b = w0plus_basis(5, 10, 4);
  return b;
}

PlusForm R1() { return plus_combination(basis5(), {{6, Rat(1)}, {1, Rat(-2)}}); }
PlusForm R2() { return plus_combination(basis5(), {{10, Rat(1)}, {1, Rat(-2)}}); }

std::map<long, Rat> fac(std::initializer_list<std::pair<const long, Rat>> l) { return std::map<long, Rat>(l); }

// Dirichlet class number formula, valid for d < -4.
long class_number_formula(long d) {
  long s = 0;
  for (long a = 1; a < -d; ++a) s += kronecker(Int(d), a) * a;
  return -s / -d;
}

// log |prod (j1 - j2)|^{8/(w1 w2)} straight from the singular moduli.
double gz_from_singular_moduli(long d1, long d2) {
  auto j1 = j_cm_oracle(d1, 40), j2 = j_cm_oracle(d2, 40);
  BigFloat acc = 0;
  for (auto& a : j1)
    for (auto& b : j2) {
      BigFloat re = a.re - b.re, im = a.im - b.im;
      acc += log(re * re + im * im) / 2;
    }
  return static_cast<double>(acc) * 8.0 / double(unit_count(d1) * unit_count(d2));
}

}  // namespace

TEST_CASE("reduced forms count the class number") {
  CHECK(reduced_forms(-3).size() == 1);
  CHECK(reduced_forms(-4).size() == 1);
  for (long d = -7; d > -400; --d)
    if (is_fundamental_discriminant(d)) CHECK_MESSAGE(long(reduced_forms(d).size()) == class_number_formula(d), d);
  CHECK(unit_count(-3) == 6);
  CHECK(unit_count(-4) == 4);
  CHECK(unit_count(-7) == 2);
}

TEST_CASE("classical singular moduli") {
  auto near = [](long d, double want) {
    auto j = j_cm_oracle(d, 40);
    REQUIRE(j.size() == 1);
    CHECK(std::fabs(static_cast<double>(j[0].re) - want) < 1e-6);
    CHECK(std::fabs(static_cast<double>(j[0].im)) < 1e-6);
  };
  near(-3, 0);
  near(-4, 1728);
  near(-7, -3375);
  near(-8, 8000);
  near(-11, -32768);
  near(-19, -884736);
}

TEST_CASE("genus character") {
  GenusChar g = make_genus_char(-3, -7);
  CHECK(g.D() == 21);
  // multiplicative
  for (long a = 1; a < 30; ++a)
    for (long b = 1; b < 30; ++b) {
      long ab = a * b;
      bool defined = true;
      for (auto& [l, e] : factor_small(ab))
        if (kronecker(Int(21), l) == -1) defined = false;
      if (!defined) continue;
      CHECK(genus_char(g, ab) == genus_char(g, a) * genus_char(g, b));
    }
  CHECK_THROWS_AS(make_genus_char(-3, -15), Error);
  CHECK_THROWS_AS(make_genus_char(-3, 5), Error);
}

TEST_CASE("Gross-Zagier values") {
  CHECK(gross_zagier_J2(-3, -7).str() == "3^2 * 5^2");
  CHECK(gross_zagier_J2(-3, -4).exponents == fac({{2, 2}, {3, 1}}));
  CHECK(gross_zagier_J2(-4, -7).exponents == fac({{3, 6}, {7, 1}}));
  CHECK(gross_zagier_J2(-3, -8).exponents == fac({{2, 4}, {5, 2}}));
  for (auto [d1, d2] : std::vector<std::pair<long, long>>{{-3, -7}, {-3, -4}, {-4, -7}, {-3, -8}, {-7, -8}, {-7, -23},
                                                          {-3, -23}, {-8, -15}}) {
    FactoredValue v = gross_zagier_J2(d1, d2);
    double a = v.log_abs(), b = gz_from_singular_moduli(d1, d2);
    CHECK_MESSAGE(std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(b)), d1 << "," << d2);
    CHECK(std::fabs(gz_oracle_log(d1, d2) - b) < 1e-8 * std::max(1.0, std::fabs(b)));
    for (auto& [l, e] : v.exponents) CHECK(4 * l <= d1 * d2);
  }
}

TEST_CASE("CM field data") {
  auto d5 = cm_field_setup(5, 5, QuadElem(-5, -1, 5));
  CHECK(d5.W_Ktilde == 10);
  CHECK(d5.rel_disc.norm() == 5);
  auto d41 = cm_field_setup(5, 41, QuadElem(-13, -1, 5));
  CHECK(d41.Delta.norm() == 41);
  CHECK(d41.W_Ktilde == 2);
  CHECK(d41.rel_disc.norm() == 5);
  CHECK(d41.delta_tilde.D == 41);
  CHECK_THROWS_AS(cm_field_setup(5, 41, QuadElem(13, 1, 5)), Error);
  CHECK_THROWS_AS(cm_field_setup(5, 43, QuadElem(-13, -1, 5)), Error);
  CHECK_THROWS_AS(cm_field_setup(5, 41, QuadElem(-5, -1, 5)), Error);
}

TEST_CASE("CM values for q = 5 and 41") {
  auto d5 = cm_field_setup(5, 5, QuadElem(-5, -1, 5));
  auto v = by_cm_value(d5, R1());
  CHECK(v.value.exponents == fac({{2, 20}, {3, 10}}));
  CHECK(v.value.sign == 1);
  CHECK(v.value.signed_str() == "+ 2^20 * 3^10");
  CHECK(by_cm_value(d5, R2()).value.exponents == fac({{2, 20}, {5, 10}}));
  auto d41 = cm_field_setup(5, 41, QuadElem(-13, -1, 5));
  auto w = by_cm_value(d41, R2());
  CHECK(w.value.str() == "2^14 * 5^9 * 37 * 41");
  CHECK(w.value.sign == 0);
  CHECK(w.value.signed_str() == "+- 2^14 * 5^9 * 37 * 41");
  CHECK(by_cm_value(d41, R1()).value.exponents == fac({{2, 14}, {3, 10}, {61, 1}, {73, 1}}));
}

TEST_CASE("CM values respect the prime bounds") {
  std::vector<std::pair<long, QuadElem>> rows{{5, QuadElem(-5, -1, 5)},
                                              {41, QuadElem(-13, -1, 5)},
                                              {61, QuadElem(-18, -4, 5)},
                                              {109, QuadElem(-21, -1, 5)}};
  for (auto& [q, D] : rows) {
    auto data = cm_field_setup(5, q, D);
    for (const PlusForm& f : {R1(), R2()}) {
      auto v = by_cm_value(data, f);
      CHECK(prime_bound_check(data, f, v).ok);
      CHECK_FALSE(v.log_terms.empty());
    }
  }
}

TEST_CASE("nonzero weight is a precondition failure") {
  auto d5 = cm_field_setup(5, 5, QuadElem(-5, -1, 5));
  try {
    by_cm_value(d5, plus_combination(basis5(), {{1, Rat(1)}}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}
