#include "hmf/plusspace.hpp"

#include <algorithm>
#include <functional>

#include "hmf/linalg.hpp"
#include "hmf/quadfield.hpp"

namespace hmf {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void require_plus_prime(long p) {
  if (!is_prime(p) || p % 4 != 1) fail(ErrorKind::Validation, "p must be a prime congruent to 1 mod 4");
}

long chi_p(long p, long n) {
  long r = ((n % p) + p) % p;
  if (r == 0) return 0;
  return mpz_kronecker_si(Int(r).get_mpz_t(), p);
}

Rat PlusForm::ctilde(long n) const {
  Rat v = c(n);
  return n % p == 0 ? 2 * v : v;
}

std::map<long, Rat> PlusForm::principal_part() const {
  std::map<long, Rat> pp;
  for (auto& [e, c] : series.coeffs())
    if (e < 0) pp[e] = c;
  return pp;
}

PlusForm make_plus_form(QSeries s, long weight, long p) {
  PlusForm f;
  f.series = std::move(s);
  f.weight = weight;
  f.p = p;
  long v = f.series.valuation();
  f.pole_order = v < 0 ? -v : 0;
  f.plus_flag = true;
  check_plus_condition(f);
  return f;
}

void check_plus_condition(const PlusForm& f) {
  for (auto& [e, c] : f.series.coeffs())
    if (chi_p(f.p, e) == -1)
      fail(ErrorKind::Internal, "plus-space condition violated at q^" + std::to_string(e));
}

Rat dirichlet_L_value(long p, long k) {
  if (k < 2 || k % 2) fail(ErrorKind::Validation, "k must be even and >= 2");
  if (p == 1) return -bernoulli(k) / Rat(k);
  require_plus_prime(p);
  Rat r = -generalized_bernoulli(k, p) / Rat(k);
  r.canonicalize();
  return r;
}

namespace {

Int ipow(long b, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return r;
}

// sum_{d|n} d^{k-1} w(d, n/d)
template <class W>
Int twisted_divisor_sum(long n, long k, W w) {
  Int acc = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) {
      long s = w(d, n / d);
      if (s) acc += s * ipow(d, k - 1);
    }
  return acc;
}

}  // namespace

QSeries eisenstein_G(long p, long k, long prec) {
  Rat c = 2 / dirichlet_L_value(p, k);
  QSeries r(0, std::max<long>(prec, 1));
  r.set(0, 1);
  for (long n = 1; n < prec; ++n)
    r.set(n, c * Rat(twisted_divisor_sum(n, k, [&](long d, long) { return chi_p(p, d); })));
  return r;
}

QSeries eisenstein_H(long p, long k, long prec) {
  QSeries r(0, std::max<long>(prec, 1));
  for (long n = 1; n < prec; ++n)
    r.set(n, Rat(twisted_divisor_sum(n, k, [&](long, long e) { return chi_p(p, e); })));
  return r;
}

PlusForm eisenstein_plus(long p, long k, int sign, long prec) {
  require_plus_prime(p);
  if (sign != 1 && sign != -1) fail(ErrorKind::Validation, "sign must be +1 or -1");
  Rat c = 2 / dirichlet_L_value(p, k);
  QSeries r(0, std::max<long>(prec, 1));
  r.set(0, 1);
  for (long n = 1; n < prec; ++n)
    r.set(n, c * Rat(twisted_divisor_sum(n, k, [&](long d, long e) { return chi_p(p, d) + sign * chi_p(p, e); })));
  PlusForm f;
  f.series = r;
  f.weight = k;
  f.p = p;
  f.plus_flag = sign == 1;
  if (f.plus_flag) check_plus_condition(f);
  return f;
}

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

QSeries pairing(const PlusForm& f, const PlusForm& g) {
  if (f.p != g.p) fail(ErrorKind::Validation, "pairing needs the same level");
  if (!f.plus_flag || !g.plus_flag) fail(ErrorKind::Validation, "pairing needs plus-space forms");
  long p = f.p;
  const QSeries& a = f.series;
  const QSeries& b = g.series;
  // Coefficient n is exact iff p n < min(a.prec + b.low, b.prec + a.low).
  long P = std::min(a.prec() + b.low(), b.prec() + a.low());
  long out_prec = floor_div(P - 1, p) + 1;
  long out_low = floor_div(a.low() + b.low(), p);
  if (out_low >= out_prec) out_low = out_prec - 1;
  QSeries r(out_low, out_prec);
  for (long n = out_low; n < out_prec; ++n) {
    Rat s = 0;
    for (auto& [m, c] : a.coeffs()) {
      long e = p * n - m;
      if (e < b.low()) break;
      if (e >= b.prec()) continue;
      Rat bc = b.coeff(e);
      if (bc == 0) continue;
      s += (m % p == 0 ? 2 * c : c) * bc;
    }
    r.set(n, s);
  }
  return r;
}

QSeries pairing(const PlusForm& f, const PlusForm& g, long out_prec) {
  QSeries r = pairing(f, g);
  if (r.prec() < out_prec) {
    long p = f.p;
    long need = p * (out_prec - 1);
    std::string which = f.series.prec() + g.series.low() <= need ? "first argument" : "second argument";
    fail(ErrorKind::Precondition, "insufficient precision in " + which + " of pairing: need coefficients up to q^" +
                                      std::to_string(need - std::min(f.series.low(), g.series.low())));
  }
  return r.truncated(out_prec);
}

ObstructionResult obstruction_check(long p, const std::map<long, Rat>& pp) {
  require_plus_prime(p);
  long maxm = 0;
  for (auto& [n, c] : pp) {
    if (n >= 0) fail(ErrorKind::Validation, "principal part exponents must be negative");
    if (c != 0 && chi_p(p, n) == -1)
      fail(ErrorKind::Validation, "principal part supported where chi_p(n) = -1 (n = " + std::to_string(n) + ")");
    maxm = std::max(maxm, -n);
  }
  ObstructionResult res;
  // S_2^+(p, chi_p) has dimension floor((p-5)/24); only the Eisenstein functional is
  // implemented, so larger p is rejected rather than silently passed.
  if ((p - 5) / 24 > 0) fail(ErrorKind::Precondition, "S_2^+ is nontrivial for this p; cusp obstructions not implemented");
  PlusForm e2 = eisenstein_plus(p, 2, 1, maxm + 1);
  Rat s = 0;
  for (auto& [n, c] : pp) s += (n % p == 0 ? 2 * c : c) * e2.c(-n);
  res.constant_term = -s / 2;
  res.ok = true;
  return res;
}

long dim_Mk_chi(long p, long k) {
  require_plus_prime(p);
  if (k < 2 || k % 2) fail(ErrorKind::Validation, "weight must be even and >= 2");
  Rat g4 = (k % 4 == 0) ? Rat(1, 4) : Rat(-1, 4);
  Rat g3 = (k % 3 == 0) ? Rat(1, 3) : (k % 3 == 2 ? Rat(-1, 3) : Rat(0));
  // sum of chi over roots of x^2 + 1 and of x^2 + x + 1 modulo p.
  long s4 = 0, s3 = 0;
  for (long x = 0; x < p; ++x) {
    if ((x * x + 1) % p == 0) s4 += chi_p(p, x);
    if ((x * x + x + 1) % p == 0) s3 += chi_p(p, x);
  }
  Rat dimS = Rat((k - 1) * (p + 1), 12) - 1 + g4 * s4 + g3 * s3;
  dimS.canonicalize();
  if (dimS.get_den() != 1) fail(ErrorKind::Internal, "non-integral dimension formula");
  return dimS.get_num().get_si() + 2;
}

namespace {

// Modular forms with character chi_p used as multiplicands.
struct ChiFactor {
  long weight;
  QSeries series;
};

std::vector<ChiFactor> chi_factors(long p, long max_weight, long prec) {
  std::vector<ChiFactor> out;
  for (long k = 2; k <= max_weight; k += 2) {
    out.push_back({k, eisenstein_G(p, k, prec)});
    out.push_back({k, eisenstein_H(p, k, prec)});
  }
  // eta(p tau)^a eta(tau)^b of weight 2 with integral q-expansion, when it exists.
  for (long a = -12; a <= 12; ++a) {
    long b = 4 - a;
    if (a == 0 || (p * a + b) % 24 != 0 || (p * a + b) < 0 || b > 0) continue;
    out.push_back({2, eta_quotient({{p, a}, {1, b}}, prec).series});
  }
  return out;
}

std::vector<QSeries> level1_monomials(long weight, long prec) {
  std::vector<QSeries> out;
  if (weight < 0 || weight % 2) return out;
  QSeries e4 = level1_form(Level1::E4, prec), e6 = level1_form(Level1::E6, prec),
          dl = level1_form(Level1::Delta, prec);
  for (long c = 0; 12 * c <= weight; ++c)
    for (long b = 0; 12 * c + 6 * b <= weight; ++b) {
      long rest = weight - 12 * c - 6 * b;
      if (rest % 4) continue;
      long a = rest / 4;
      // Delta^c E6^b E4^a with b <= 1 keeps the monomials independent.
      if (b > 1) continue;
      QSeries m = QSeries::constant(1, prec);
      if (a) m = mul(m, pow(e4, a));
      if (b) m = mul(m, e6);
      if (c) m = mul(m, pow(dl, c));
      out.push_back(m.truncated(prec));
    }
  return out;
}

RatVec to_vec(const QSeries& s, long n) {
  RatVec v(n);
  for (auto& [e, c] : s.coeffs())
    if (e >= 0 && e < n) v[e] = c;
  return v;
}

// Basis (as q-expansion vectors of length n) of M_k(Gamma_0(p), chi_p) built from
// products of chi-forms and level-one forms, certified by reaching the known dimension.
std::vector<RatVec> span_Mk_chi(long p, long k, long n) {
  long dim = dim_Mk_chi(p, k);
  Echelon ech(n);
  auto factors = chi_factors(p, std::min<long>(k, 12), n);
  std::function<bool(size_t, long, long, const QSeries&)> rec;
  // Choose an odd number of chi-factors (odd count carries chi_p), fill with level one.
  rec = [&](size_t start, long used_w, long count, const QSeries& prod) -> bool {
    if (count % 2 == 1) {
      for (auto& m : level1_monomials(k - used_w, n)) {
        ech.insert(to_vec(mul(prod, m), n));
        if ((long)ech.rank() == dim) return true;
      }
    }
    if (count >= 5) return false;
    for (size_t i = start; i < factors.size(); ++i) {
      if (used_w + factors[i].weight > k) continue;
      if (rec(i, used_w + factors[i].weight, count + 1, mul(prod, factors[i].series).truncated(n))) return true;
    }
    return false;
  };
  rec(0, 0, 0, QSeries::constant(1, n));
  if ((long)ech.rank() != dim)
    fail(ErrorKind::Internal, "rank check failed for M_" + std::to_string(k) + "(" + std::to_string(p) +
                                  ", chi): rank " + std::to_string(ech.rank()) + " < " + std::to_string(dim));
  return ech.rows();
}

Rat leading_coeff(long p, long m) { return m % p == 0 ? Rat(1, 2) : Rat(1); }

}  // namespace

PlusForm w0plus_form_direct(long p, long m, long prec) {
  require_plus_prime(p);
  if (m < 1 || chi_p(p, m) == -1) fail(ErrorKind::Validation, "no plus-space form with principal part q^-" + std::to_string(m));
  long nminus = 0;
  for (long r = 1; r < p; ++r) nminus += chi_p(p, r) == -1;
  // Multiplier Delta(p tau)^a Delta(tau)^b vanishes to order p a + b at infinity and is
  // nonzero-free on H; weight 12(a + b) stays small even for large m.
  for (long s = 1; s <= m + 2; ++s) {
    for (long a = s; a >= 0; --a) {
      long b = s - a;
      long ord = p * a + b;
      if (ord < m) continue;
      long k = 12 * s;
      long dim = dim_Mk_chi(p, k);
      long window = std::max(prec, (dim + 20) * p / nminus + 1);
      long n = window + ord;
      long sturm = k * (p + 1) / 12 + 1;
      n = std::max(n, sturm + 1);
      auto basis = span_Mk_chi(p, k, n);
      QSeries mult = pow(scale_arg(level1_form(Level1::Delta, n / p + 2), p), a);
      mult = mul(mult, pow(level1_form(Level1::Delta, n + 2), b));
      QSeries minv = invert_unit(mult.truncated(n + ord)).truncated(n - ord);
      std::vector<QSeries> cols;
      for (auto& row : basis) {
        QSeries F(0, n);
        for (long e = 0; e < n; ++e) F.set(e, row[e]);
        cols.push_back(mul(F, minv));
      }
      long top = cols[0].prec();
      std::vector<RatVec> A;
      RatVec rhs;
      for (long e = -ord; e < top; ++e) {
        bool eq = e < 0 || chi_p(p, e) == -1;
        if (!eq) continue;
        RatVec row(basis.size());
        for (size_t i = 0; i < cols.size(); ++i) row[i] = cols[i].coeff(e);
        A.push_back(row);
        rhs.push_back(e == -m ? leading_coeff(p, m) : Rat(0));
      }
      auto sol = solve_linear(A, rhs);
      if (sol.status == SolveStatus::Inconsistent) continue;
      if (sol.status == SolveStatus::Underdetermined)
        fail(ErrorKind::Internal, "plus-space form not unique in the Delta-multiplier system");
      QSeries f(-ord, top);
      for (size_t i = 0; i < cols.size(); ++i)
        if (sol.x[i] != 0) f = f + sol.x[i] * cols[i];
      return make_plus_form(f.normalized(), 0, p);
    }
  }
  fail(ErrorKind::Internal, "no Delta-multiplier solution for f_" + std::to_string(m));
}

std::vector<PlusForm> w0plus_basis(long p, long m_max, long prec, BasisOptions opt) {
  require_plus_prime(p);
  if (p != 5 && !opt.allow_unvalidated_p) {
    if (p == 13 || p == 17)
      fail(ErrorKind::Validation, "p = " + std::to_string(p) + " is only rank-checked; enable it explicitly");
    fail(ErrorKind::Validation, "unsupported p (supported: 5; 13 and 17 when enabled)");
  }
  if (p != 5 && p != 13 && p != 17) fail(ErrorKind::Validation, "unsupported p (supported: 5, 13, 17)");
  if (m_max < 1) return {};

  long rungs = (m_max + p - 1) / p;
  long seed_prec = prec + p * rungs + p;
  QSeries jp = scale_arg(level1_form(Level1::j, seed_prec / p + 2), p);

  std::map<long, PlusForm> built;
  for (long m = 1; m <= m_max; ++m) {
    if (chi_p(p, m) == -1) continue;
    long mseed = m % p == 0 ? p : m % p;
    if (m == mseed) {
      built[m] = w0plus_form_direct(p, m, seed_prec);
      continue;
    }
    // j(p tau) f_{m-p} has principal part starting at q^{-m}; clear lower poles.
    QSeries g = mul(jp, built.at(m - p).series);
    for (long j = m - 1; j >= 1; --j) {
      Rat a = g.coeff(-j);
      if (a == 0) continue;
      auto it = built.find(j);
      if (it == built.end()) fail(ErrorKind::Internal, "pole at q^-" + std::to_string(j) + " outside the plus space");
      g = g - (a / it->second.c(-j)) * it->second.series;
    }
    built[m] = make_plus_form(g.normalized(), 0, p);
  }
  std::vector<PlusForm> out;
  for (auto& [m, f] : built) {
    if (f.prec() < prec) fail(ErrorKind::Internal, "basis precision shortfall");
    PlusForm g = f;
    g.series = f.series.truncated(prec);
    out.push_back(g);
  }
  return out;
}

PlusForm plus_combination(const std::vector<PlusForm>& basis, const std::map<long, Rat>& ctp) {
  if (basis.empty()) fail(ErrorKind::Validation, "empty basis");
  long p = basis[0].p;
  QSeries acc = QSeries::constant(0, basis[0].prec());
  for (auto& [m, a] : ctp) {
    if (a == 0) continue;
    const PlusForm* f = nullptr;
    for (auto& b : basis)
      if (b.pole_order == m) f = &b;
    if (!f) fail(ErrorKind::Validation, "basis has no f_" + std::to_string(m));
    acc = acc + a * f->series;
  }
  PlusForm r = make_plus_form(acc, 0, p);
  return r;
}

}  // namespace hmf
