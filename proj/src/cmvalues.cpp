#include "hmf/cmvalues.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace hmf {

using boost::multiprecision::cos;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::sin;
using boost::multiprecision::sqrt;

namespace {

long vp(Int n, long p) {
  if (n == 0) return 1000000;
  long v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    n /= p;
    ++v;
  }
  return v;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int ipow(long b, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

// Integral coordinates (A, B) of e = A + B omega; fails if e is not integral.
std::pair<Int, Int> int_coords(const QuadElem& e) {
  auto [A, B] = e.omega_coords();
  if (A.get_den() != 1 || B.get_den() != 1) fail(ErrorKind::Internal, "element is not integral");
  return {A.get_num(), B.get_num()};
}

// Root of X^2 - D X + (D^2 - D)/4 modulo ell^N lifting r (simple root).
Int hensel_root(long D, long ell, long r, long N) {
  Int mod = ipow(ell, N);
  Int c0 = (Int(D) * D - D) / 4;
  Int x = r;
  for (int it = 0; it < 2 * N + 4; ++it) {
    Int f = x * x - Int(D) * x + c0;
    Int fp = 2 * x - D;
    Int inv;
    if (!mpz_invert(inv.get_mpz_t(), fp.get_mpz_t(), mod.get_mpz_t())) fail(ErrorKind::Internal, "hensel: repeated root");
    x = mod_pos(x - f * inv, mod);
  }
  return x;
}

struct LocalClass {
  long val = 0;
  bool square = false;      // unit part is a square in the completion
  bool square_mod4 = true;  // unit part is a square modulo 4 (only meaningful above 2)
};

// Square class of a nonzero integral element at the prime P.
LocalClass local_class(const QuadElem& e, const PrimeIdeal& P) {
  long D = e.D, ell = P.ell;
  LocalClass out;
  auto [A, B] = int_coords(e);
  if (P.kind == PrimeKind::Inert) {
    long v = std::min(vp(A, ell), vp(B, ell));
    out.val = v;
    Int s = ipow(ell, v);
    Int a = A / s, b = B / s;
    if (ell != 2) {
      Int n = (QuadElem::from_omega_coords(Rat(a), Rat(b), D)).norm().get_num();
      out.square = kronecker(n, ell) == 1;
      return out;
    }
    // Unramified quadratic extension of Q_2: brute-force squares in O/8O and O/4O.
    Int c0 = (Int(D) * D - D) / 4;
    auto sq = [&](long x, long y, long mod) {
      // (x + y w)^2 = x^2 + 2xy w + y^2 (D w - c0)
      Int r0 = Int(x) * x - Int(y) * y * c0, r1 = 2 * Int(x) * y + Int(y) * y * D;
      return std::make_pair(mod_pos(r0, mod), mod_pos(r1, mod));
    };
    auto target8 = std::make_pair(mod_pos(a, 8), mod_pos(b, 8));
    auto target4 = std::make_pair(mod_pos(a, 4), mod_pos(b, 4));
    out.square = out.square_mod4 = false;
    for (long x = 0; x < 8; ++x)
      for (long y = 0; y < 8; ++y) {
        if (sq(x, y, 8) == target8) out.square = true;
        if (sq(x, y, 4) == target4) out.square_mod4 = true;
      }
    return out;
  }
  if (P.kind == PrimeKind::Ramified) {
    if (ell == 2) fail(ErrorKind::Internal, "ramified prime above 2 not supported");
    long v = valuation(QuadIdeal::principal(e), P);
    out.val = v;
    if (v % 2) return out;
    // e = (x + y sqrt D)/2 with omega -> sqrt D/2 + D/2; reduce x/(2 ell^{v/2}) mod ell.
    Int s = ipow(ell, v / 2);
    Rat xr = e.x / Rat(s);
    if (xr.get_den() % ell == 0) fail(ErrorKind::Internal, "ramified reduction failed");
    Int num = mod_pos(xr.get_num(), ell), den = mod_pos(2 * xr.get_den(), ell), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), Int(ell).get_mpz_t());
    out.square = kronecker(mod_pos(num * inv, ell), ell) == 1;
    return out;
  }
  // Degree one: embed into Z_ell through the lifted root.
  Int n = e.norm().get_num();
  long N = vp(n, ell) + 6;
  Int mod = ipow(ell, N);
  Int r = hensel_root(D, ell, P.root, N);
  Int img = mod_pos(A + B * r, mod);
  long v = vp(img, ell);
  if (v >= N - 3) fail(ErrorKind::Internal, "local precision exhausted");
  out.val = v;
  Int u = img / ipow(ell, v);
  if (ell == 2) {
    out.square = mod_pos(u, 8) == 1;
    out.square_mod4 = mod_pos(u, 4) == 1;
  } else {
    out.square = kronecker(mod_pos(u, ell), ell) == 1;
  }
  return out;
}

// Primes of F with odd valuation in e, and whether e is "unramified at 2".
Rat odd_part_norm(const QuadElem& e, bool& ok_at_2) {
  Rat nrm = 1;
  ok_at_2 = true;
  std::set<long> ells;
  for (auto& [pr, x] : factor_int(abs(e.norm().get_num()))) ells.insert(pr.get_si());
  ells.insert(2);
  for (long ell : ells)
    for (auto& P : primes_above(ell, e.D)) {
      LocalClass c = local_class(e, P);
      if (ell == 2) {
        if (c.val % 2 || !c.square_mod4) ok_at_2 = false;
        continue;
      }
      if (c.val % 2) nrm *= Rat(P.abs_norm());
    }
  return nrm;
}

}  // namespace

// ---------------------------------------------------------------- Gross-Zagier

GenusChar make_genus_char(long d1, long d2) {
  if (d1 >= 0 || d2 >= 0 || !is_fundamental_discriminant(d1) || !is_fundamental_discriminant(d2))
    fail(ErrorKind::Validation, "genus character needs negative fundamental discriminants");
  if (std::gcd(d1, d2) != 1) fail(ErrorKind::Validation, "d1 and d2 must be coprime");
  return {d1, d2};
}

int genus_char(const GenusChar& gc, long n) {
  if (n <= 0) fail(ErrorKind::Validation, "genus character needs n > 0");
  int r = 1;
  for (auto& [ell, e] : factor_small(n)) {
    if (kronecker(Int(gc.D()), ell) == -1)
      fail(ErrorKind::Precondition, "genus character undefined at " + std::to_string(ell));
    long s = gc.d1 % ell ? kronecker(Int(gc.d1), ell) : kronecker(Int(gc.d2), ell);
    if (e % 2) r *= s;
  }
  return r;
}

double FactoredValue::log_abs() const {
  double s = 0;
  for (auto& [l, e] : exponents) s += e.get_d() * std::log(double(l));
  return s;
}

std::string FactoredValue::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [l, e] : exponents) {
    if (e == 0) continue;
    if (!first) os << " * ";
    first = false;
    os << l;
    if (e != 1) os << "^" << rat_str(e);
  }
  if (first) os << "1";
  return os.str();
}

std::string FactoredValue::signed_str() const {
  return std::string(sign > 0 ? "+ " : sign < 0 ? "- " : "+- ") + str();
}

FactoredValue gross_zagier_J2(long d1, long d2) {
  GenusChar gc = make_genus_char(d1, d2);
  long D = gc.D();
  FactoredValue out;
  long xs = isqrt(Int(D)).get_si();
  for (long x = -xs; x <= xs; ++x) {
    if (x * x >= D || (D - x * x) % 4) continue;
    long nn = (D - x * x) / 4;
    for (long n = 1; n <= nn; ++n) {
      if (nn % n) continue;
      int eps = genus_char(gc, nn / n);
      for (auto& [ell, e] : factor_small(n)) out.exponents[ell] += Rat(eps * e);
    }
  }
  for (auto it = out.exponents.begin(); it != out.exponents.end();)
    it = it->second == 0 ? out.exponents.erase(it) : std::next(it);
  return out;
}

std::vector<ReducedForm> reduced_forms(long d) {
  if (d >= 0 || ((d % 4) + 4) % 4 > 1) fail(ErrorKind::Validation, "negative discriminant expected");
  std::vector<ReducedForm> out;
  for (long a = 1; 3 * a * a <= -d; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long t = b * b - d;
      if (t % (4 * a)) continue;
      long c = t / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      out.push_back({a, b, c});
    }
  return out;
}

long unit_count(long d) { return d == -3 ? 6 : d == -4 ? 4 : 2; }

std::vector<BigComplex> j_cm_oracle(long d, int digits) {
  (void)digits;
  static const long kTerms = 80;
  static const QSeries jser = level1_form(Level1::j, kTerms + 1);
  std::vector<BigComplex> out;
  const BigFloat pi = boost::math::constants::pi<BigFloat>();
  for (auto& f : reduced_forms(d)) {
    BigFloat re = BigFloat(-f.b) / (2 * f.a);
    BigFloat im = sqrt(BigFloat(-d)) / (2 * f.a);
    BigFloat rad = exp(-2 * pi * im), ang = 2 * pi * re;
    BigFloat qr = rad * cos(ang), qi = rad * sin(ang);
    // Horner in q for sum_{n>=0} c(n) q^n, then add 1/q.
    BigFloat sr = 0, si = 0;
    for (long n = kTerms; n >= 0; --n) {
      BigFloat c(jser.coeff(n).get_str());
      BigFloat tr = sr * qr - si * qi + c, ti = sr * qi + si * qr;
      sr = tr;
      si = ti;
    }
    BigFloat den = qr * qr + qi * qi;
    out.push_back({sr + qr / den, si - qi / den});
  }
  return out;
}

double gz_oracle_log(long d1, long d2) {
  auto j1 = j_cm_oracle(d1), j2 = j_cm_oracle(d2);
  BigFloat s = 0;
  for (auto& a : j1)
    for (auto& b : j2) {
      BigFloat dr = a.re - b.re, di = a.im - b.im;
      s += log(dr * dr + di * di) / 2;
    }
  return double(s * 8 / (unit_count(d1) * unit_count(d2)));
}

// ---------------------------------------------------------------- CM values of Borcherds products

CMFieldData cm_field_setup(long p, long q, const QuadElem& Delta) {
  require_plus_prime(p);
  if (!is_prime(q) || q % 4 != 1) fail(ErrorKind::Validation, "q must be a prime = 1 mod 4");
  if (Delta.D != p) fail(ErrorKind::Validation, "Delta must lie in Q(sqrt p)");
  if (!Delta.is_integral()) fail(ErrorKind::Validation, "Delta must be integral");
  if (Delta.sign() >= 0 || Delta.sign_conj() >= 0) fail(ErrorKind::Validation, "Delta must be totally negative");
  bool ok2 = true;
  Rat nrel = odd_part_norm(Delta, ok2);
  if (!ok2 || nrel != q)
    fail(ErrorKind::Precondition, "d_K is not p^2 q for this Delta (relative discriminant norm " + rat_str(nrel) +
                                      (ok2 ? "" : ", ramified at 2") + ")");
  CMFieldData data;
  data.p = p;
  data.q = q;
  data.Delta = Delta;
  // (sqrt Delta + sqrt Delta')^2 = tr Delta - 2 sqrt(N Delta); N Delta = q s^2.
  Rat N = Delta.norm();
  Rat s2 = N / q;
  Int sn, sd;
  if (!is_square(s2.get_num()) || !is_square(s2.get_den()))
    fail(ErrorKind::Precondition, "inconsistent reflex field: N(Delta)/q is not a square");
  Rat s(isqrt(s2.get_num()), isqrt(s2.get_den()));
  data.delta_tilde = QuadElem(2 * Delta.trace(), -4 * s, q);
  if (!data.delta_tilde.is_integral()) fail(ErrorKind::Internal, "delta_tilde not integral");
  // The relative discriminant is the unique prime of Ftilde above p where delta_tilde has odd valuation.
  std::vector<PrimeIdeal> cand;
  for (auto& P : primes_above(p, q))
    if (local_class(data.delta_tilde, P).val % 2) cand.push_back(P);
  if (cand.size() != 1 || cand[0].abs_norm() != p)
    fail(ErrorKind::Precondition, "could not identify the relative discriminant above p");
  data.rel_disc = cand[0].ideal;
  // Everything else must be unramified in Ktilde/Ftilde.
  bool ok2t = true;
  Rat nt = odd_part_norm(data.delta_tilde, ok2t);
  if (!ok2t || nt != p) fail(ErrorKind::Precondition, "Ktilde/Ftilde has relative discriminant of norm != p");
  data.W_Ktilde = (p == 5 && q == 5) ? 10 : 2;
  return data;
}

SplitKind split_kind(const CMFieldData& data, const PrimeIdeal& l) {
  if (l.ideal == data.rel_disc) return SplitKind::Ramified;
  LocalClass c = local_class(data.delta_tilde, l);
  if (c.val % 2) fail(ErrorKind::Internal, "unexpected ramification in Ktilde/Ftilde");
  return c.square ? SplitKind::Split : SplitKind::Inert;
}

long rho(const CMFieldData& data, const QuadIdeal& a) {
  if (!a.is_integral()) return 0;
  long r = 1;
  for (auto& [P, e] : ideal_factor(a)) {
    switch (split_kind(data, P)) {
      case SplitKind::Split: r *= e + 1; break;
      case SplitKind::Inert:
        if (e % 2) return 0;
        break;
      case SplitKind::Ramified: break;
    }
  }
  return r;
}

std::map<long, Rat> bt(const CMFieldData& data, const QuadElem& t) {
  if (t.is_zero()) fail(ErrorKind::Validation, "B_t needs t != 0");
  QuadIdeal td = QuadIdeal::principal(t) * data.rel_disc;
  if (!td.is_integral()) fail(ErrorKind::Validation, "t is not in the inverse relative different");
  std::map<long, Rat> out;
  int nonsplit_with_odd = 0;
  for (auto& [P, e] : ideal_factor(td)) {
    (void)e;
    if (split_kind(data, P) == SplitKind::Split) continue;
    long ord = valuation(QuadIdeal::principal(t), P);
    long r = rho(data, td * inverse(P.ideal));
    if (r == 0 || ord + 1 == 0) continue;
    ++nonsplit_with_odd;
    out[P.ell] += Rat((ord + 1) * r * P.residue_degree());
  }
  // For t > 0 > t' at most one prime contributes.
  if (t.sign() > 0 && t.sign_conj() < 0 && nonsplit_with_odd > 1)
    fail(ErrorKind::Internal, "B_t has more than one contributing prime");
  return out;
}

std::map<long, Rat> b_m(const CMFieldData& data, long m) {
  std::map<long, Rat> out;
  long p = data.p, q = data.q;
  long ns = isqrt(Int(m * m * q)).get_si();
  for (long n = -ns; n <= ns; ++n) {
    if (n * n >= m * m * q) continue;
    QuadElem t(make_rat(n, p), make_rat(m, p), q);
    if (!(QuadIdeal::principal(t) * data.rel_disc).is_integral()) continue;
    for (auto& [l, c] : bt(data, t)) out[l] += c;
  }
  return out;
}

CMValue by_cm_value(const CMFieldData& data, const PlusForm& f) {
  if (f.p != data.p) fail(ErrorKind::Validation, "level of f does not match F");
  if (f.c(0) != 0) fail(ErrorKind::Precondition, "nonzero weight; Petersson-metric variant out of scope");
  CMValue v;
  for (auto& [n, c] : f.principal_part()) {
    Rat ct = f.ctilde(n);
    if (ct == 0) continue;
    if (ct.get_den() != 1) fail(ErrorKind::Precondition, "ctilde(" + std::to_string(n) + ") is not integral");
    for (auto& [l, x] : b_m(data, -n)) v.log_terms[l] += make_rat(data.W_Ktilde, 4) * ct * x;
  }
  for (auto it = v.log_terms.begin(); it != v.log_terms.end();)
    it = it->second == 0 ? v.log_terms.erase(it) : std::next(it);
  v.value.exponents = v.log_terms;
  v.value.sign = data.p == data.q ? 1 : 0;
  return v;
}

BoundCheck prime_bound_check(const CMFieldData& data, const PlusForm& f, const CMValue& v) {
  BoundCheck out;
  std::vector<long> M;
  for (auto& [n, c] : f.principal_part())
    if (f.ctilde(n) != 0) M.push_back(-n);
  long N = M.empty() ? 0 : *std::max_element(M.begin(), M.end());
  long p = data.p, q = data.q;
  for (auto& [l, e] : v.log_terms) {
    if (e == 0) continue;
    bool div = false;
    for (long m : M)
      for (long n = 0; n * n < m * m * q; ++n)
        if ((m * m * q - n * n) % (4 * p * l) == 0) div = true;
    bool small = Rat(l) <= make_rat(N * N * q, 4 * p);
    if (!div || !small) {
      out.ok = false;
      out.offending.push_back(l);
    }
  }
  return out;
}

}  // namespace hmf
