#include "hmf/borcherds.hpp"

#include <algorithm>
#include <cmath>

namespace hmf {

namespace {

double rat_d(const Rat& r) { return r.get_d(); }

// Double-precision height with an exact fallback near the boundary.
struct Height {
  const WeylChamber& W;
  double s, t;  // L = v*s + u*t
  explicit Height(const WeylChamber& W_) : W(W_) {
    s = rat_d(W.w1 + W.w2) / 2;
    t = rat_d(W.w1 - W.w2) / (2 * std::sqrt(double(W.D)));
  }
  double operator()(const DualIndex& k) const { return k.v * s + k.u * t; }
  // L(k) <= C
  bool within(const DualIndex& k, const Rat& C, double Cd) const {
    double x = (*this)(k);
    double tol = 1e-9 * (1 + std::abs(x) + std::abs(Cd));
    if (x < Cd - tol) return true;
    if (x > Cd + tol) return false;
    return compare_height(k, W, C) <= 0;
  }
};

}  // namespace

QuadElem pair_with(const DualIndex& k, const WeylChamber& W) {
  // lambda w1 + lambda' w2 = v (w1 + w2)/2 + (u/D)(w1 - w2) sqrt(D)/2
  return QuadElem(Rat(k.v) * (W.w1 + W.w2), Rat(k.u) * (W.w1 - W.w2) / W.D, W.D);
}

int compare_height(const DualIndex& k, const WeylChamber& W, const Rat& c) {
  QuadElem L = pair_with(k, W);
  return sign_sqrt(L.x - 2 * c, L.y, W.D);
}

std::vector<DualIndex> norm_solutions(long D, long m, long ubound) {
  std::vector<DualIndex> out;
  for (long u = -ubound; u <= ubound; ++u) {
    Int r = Int(u) * u - 4 * Int(m);
    if (r < 0 || r % D != 0) continue;
    Int v2 = r / D;
    Int v = isqrt(v2);
    if (v * v != v2) continue;
    for (long s : {1L, -1L}) {
      DualIndex k{u, s * v.get_si()};
      if (!in_dual(dual_to_elem(k, D))) continue;
      out.push_back(k);
      if (v == 0) break;
    }
  }
  return out;
}

WeylChamber chamber_of(const QuadField& F, const std::set<long>& m_set, const Rat& w1, const Rat& w2) {
  if (w1 <= 0 || w2 <= 0) fail(ErrorKind::Validation, "chamber_of: basepoint must have positive coordinates");
  WeylChamber W{F.D(), m_set, w1, w2};
  for (long m : m_set) {
    if (m <= 0) fail(ErrorKind::Validation, "chamber_of: m must be positive");
    // (lambda, W) = 0 forces the rational and sqrt(D) parts to vanish: v = 0 and u (w1 - w2) = 0.
    // With u^2 = 4m + D v^2 > 0 this means w1 = w2 and u = +-2 sqrt(m).
    for (auto& k : norm_solutions(F.D(), m, 2 * long(std::sqrt(double(m))) + 2))
      if (pair_with(k, W).is_zero()) fail(ErrorKind::Precondition, "ambiguous chamber");
  }
  return W;
}

ReducedSet reduced_set(long m, const WeylChamber& W) {
  QuadField F = QuadField::from_disc(W.D);
  QuadElem e2 = F.eps0_sq(), e2inv = e2.conj();
  double ed = e2.to_double();
  long ub = long((ed + 1) * std::sqrt(double(m))) + 2;
  std::set<DualIndex> reps;
  for (auto k : norm_solutions(W.D, m, ub)) {
    if (dual_to_elem(k, W.D).sign() <= 0) continue;
    if (pair_with(k, W).is_zero()) fail(ErrorKind::Precondition, "ambiguous chamber");
    while (pair_with(k, W).sign() < 0) k = dual_mul_unit(k, e2);
    while (pair_with(dual_mul_unit(k, e2inv), W).sign() > 0) k = dual_mul_unit(k, e2inv);
    reps.insert(k);
  }
  ReducedSet R{m, W, {}};
  for (auto& k : reps) R.lambdas.push_back(dual_to_elem(k, W.D));
  return R;
}

QuadElem weyl_vector(long m, const WeylChamber& W) {
  QuadField F = QuadField::from_disc(W.D);
  QuadElem den = F.eps0_sq() - QuadElem::from_rat(1, W.D);
  QuadElem rho = QuadElem::from_rat(0, W.D);
  for (auto& l : reduced_set(m, W).lambdas) rho = rho + l / den;
  return rho;
}

LocalBorcherdsData local_borcherds_data(long m, const WeylChamber& W, const Rat& bound) {
  LocalBorcherdsData out{weyl_vector(m, W), {}};
  // (lambda, W) <= bound bounds |lambda| w1 and |lambda'| w2 once lambda lambda' = -m/D is fixed.
  double b = rat_d(bound), wmin = std::min(rat_d(W.w1), rat_d(W.w2));
  double mD = double(m) / W.D;
  double lam = (b + std::sqrt(b * b + 4 * rat_d(W.w1 * W.w2) * mD)) / (2 * wmin);
  long ub = long(std::sqrt(double(W.D)) * (lam + mD / std::max(lam, 1e-9) + 1)) + 2;
  for (auto& k : norm_solutions(W.D, m, ub)) {
    if (pair_with(k, W).sign() <= 0) continue;
    if (compare_height(k, W, bound) > 0) continue;
    out.lambdas.push_back(dual_to_elem(k, W.D));
  }
  return out;
}

Rat height_for_trace(const WeylChamber& W, const QuadElem& rho, long T) {
  Rat wmax = std::max(W.w1, W.w2);
  // L(rho) as a + b sqrt(D); take a rational lower bound for it.
  Rat a = rho.x * (W.w1 + W.w2) / 2, b = rho.y * (W.w1 - W.w2) / 2;
  double Ld = rat_d(a) + rat_d(b) * std::sqrt(double(W.D));
  Rat lower(long(std::floor(Ld)) - 1);
  return wmax * T - lower;
}

long borcherds_required_prec(const WeylChamber& W, const Rat& C, long pole_order) {
  // Totally positive nu with L(nu) <= C have D nu nu' <= D C^2/(4 w1 w2).
  Rat bound = Rat(W.D) * C * C / (4 * W.w1 * W.w2);
  Int fl = bound.get_num() / bound.get_den();
  (void)pole_order;
  return fl.get_si() + 2;
}

namespace {

// Factors with (nu, W) in (0, C]: returns (nu, ctilde(D nu nu')).
std::vector<std::pair<DualIndex, Int>> product_factors(const PlusForm& f, const WeylChamber& W, const Rat& C) {
  Height H(W);
  double Cd = rat_d(C);
  double w1 = rat_d(W.w1), w2 = rat_d(W.w2);
  double wmin = std::min(w1, w2), wmax = std::max(w1, w2);
  double M = double(std::max(f.pole_order, 0L)) / W.D;
  double B = std::max((Cd + std::sqrt(Cd * Cd + 4 * w1 * w2 * M)) / (2 * wmin) * wmax / wmin, Cd / wmin) + 1;
  long vb = long(2 * B) + 2, ub = long(2 * B * std::sqrt(double(W.D))) + 2;
  std::vector<std::pair<DualIndex, Int>> out;
  for (long v = -vb; v <= vb; ++v)
    for (long u = -ub; u <= ub; ++u) {
      DualIndex k{u, v};
      if (u == 0 && v == 0) continue;
      if (((u - W.D * v) % 2 + 2) % 2) continue;
      if (pair_with(k, W).sign() <= 0) continue;
      if (!H.within(k, C, Cd)) continue;
      Int n = dual_scaled_norm(k, W.D);
      if (n < -f.pole_order) continue;
      if (n >= f.prec())
        fail(ErrorKind::Precondition, "borcherds_product: need coefficients of f below q^" +
                                          Int(n + 1).get_str() + ", have " + std::to_string(f.prec()));
      Rat e = f.ctilde(n.get_si());
      if (e == 0) continue;
      if (e.get_den() != 1) fail(ErrorKind::Precondition, "borcherds_product: non-integral exponent " + rat_str(e));
      out.push_back({k, e.get_num()});
    }
  std::sort(out.begin(), out.end(), [&](auto& a, auto& b) { return H(a.first) < H(b.first); });
  return out;
}

}  // namespace

BorcherdsProduct borcherds_product(const PlusForm& f, const WeylChamber& W, const Rat& C) {
  if (f.p != W.D) fail(ErrorKind::Validation, "borcherds_product: level and field differ");
  check_plus_condition(f);
  BorcherdsProduct P;
  P.D = W.D;
  P.chamber = W;
  P.C = C;
  P.weight = f.c(0);
  P.rho = QuadElem::from_rat(0, W.D);
  bool meromorphic = false;
  for (auto& [n, c] : f.principal_part()) {
    long m = -n;
    Rat ct = f.ctilde(n);
    if (ct == 0) continue;
    if (ct.get_den() != 1) fail(ErrorKind::Precondition, "borcherds_product: ctilde(" + std::to_string(n) +
                                                             ") = " + rat_str(ct) + " is not integral");
    if (chi_p(W.D, m) == -1) continue;
    if (!W.m_set.count(m)) fail(ErrorKind::Validation, "borcherds_product: chamber does not cover m = " + std::to_string(m));
    P.divisor.push_back({m, ct.get_num().get_si()});
    if (ct < 0) meromorphic = true;
    P.rho = P.rho + ct * weyl_vector(m, W);
  }
  P.holomorphic = !meromorphic;

  Height H(W);
  double Cd = rat_d(C);
  std::map<DualIndex, Int> cur{{DualIndex{0, 0}, Int(1)}};
  for (auto& [k, e] : product_factors(f, W, C)) {
    // (1 - X)^e = sum_j b_j X^j, b_j = b_{j-1} * (j - 1 - e)/j
    std::vector<Int> b{Int(1)};
    std::map<DualIndex, Int> next = cur;
    for (long j = 1;; ++j) {
      DualIndex kj{k.u * j, k.v * j};
      if (!H.within(kj, C, Cd)) break;
      Int bj = b.back() * (Int(j - 1) - e);
      bj /= j;
      b.push_back(bj);
      if (bj == 0) break;
      for (auto& [mu, c] : cur) {
        DualIndex t = mu + kj;
        if (!H.within(t, C, Cd)) continue;
        next[t] += c * bj;
      }
    }
    cur.clear();
    for (auto& [mu, c] : next)
      if (c != 0) cur.emplace(mu, c);
  }
  P.terms = std::move(cur);

  // Totally positive mu with tr mu <= T satisfy L(mu) <= max(w) T, so they are certified once
  // max(w) T - L(rho) <= C.
  Rat wmax = std::max(W.w1, W.w2);
  QuadElem Lr = QuadElem(P.rho.x * (W.w1 + W.w2), P.rho.y * (W.w1 - W.w2), W.D);
  long T = -1;
  while (true) {
    // C + L(rho) - wmax (T+1) >= 0 ?
    QuadElem s = Lr + QuadElem::from_rat(C - wmax * (T + 1), W.D);
    if (s.sign() < 0) break;
    ++T;
    if (T > 100000) fail(ErrorKind::Internal, "borcherds_product: runaway trace bound");
  }
  P.trace_prec = T + 1;
  return P;
}

HilbertQExpansion BorcherdsProduct::to_hilbert() const {
  if (!holomorphic) fail(ErrorKind::Precondition, "borcherds product is meromorphic; no holomorphic expansion");
  if (!in_dual(rho)) fail(ErrorKind::Precondition, "Weyl vector outside the inverse different (multiplier system)");
  if (weight.get_den() != 1) fail(ErrorKind::Precondition, "non-integral weight " + rat_str(weight));
  DualIndex r = elem_to_dual(rho);
  HilbertQExpansion h;
  h.D = D;
  h.weight = weight.get_num().get_si();
  h.trace_prec = trace_prec;
  for (auto& [k, c] : terms) {
    DualIndex mu = k + r;
    if (mu.u == 0 && mu.v == 0) {
      h.const_term = Rat(c);
      continue;
    }
    if (!dual_totally_positive(mu, D))
      fail(ErrorKind::Internal, "borcherds product: nonzero coefficient at a non-positive exponent (" +
                                    std::to_string(mu.u) + "," + std::to_string(mu.v) + ")");
    if (mu.v < trace_prec) h.set(mu, Rat(c));
  }
  h.parity = detect_parity(h);
  check_invariants(h, QuadField::from_disc(D));
  return h;
}

namespace {

struct LiftSetup {
  QuadField F;
  WeylChamber W;
  QuadElem rho;
  long mmax = 0;
};

LiftSetup lift_setup(long p, const std::map<long, Rat>& ctp, std::optional<std::pair<Rat, Rat>> basepoint) {
  require_plus_prime(p);
  QuadField F = QuadField::from_disc(p);
  std::set<long> ms;
  long mmax = 0;
  for (auto& [m, a] : ctp)
    if (a != 0) {
      if (m <= 0) fail(ErrorKind::Validation, "borcherds_lift: principal part indices must be positive");
      ms.insert(m);
      mmax = std::max(mmax, m);
    }
  auto bp = basepoint ? *basepoint : std::pair<Rat, Rat>{2, 3};
  WeylChamber W = chamber_of(F, ms, bp.first, bp.second);
  QuadElem rho = QuadElem::from_rat(0, p);
  for (auto& [m, a] : ctp)
    if (a != 0 && chi_p(p, m) != -1) rho = rho + a * weyl_vector(m, W);
  return {F, W, rho, mmax};
}

BorcherdsProduct lift_at(long p, const std::map<long, Rat>& ctp, const LiftSetup& S, const Rat& C, BasisOptions opt) {
  long prec = borcherds_required_prec(S.W, C, S.mmax);
  auto basis = w0plus_basis(p, std::max(S.mmax, 1L), prec, opt);
  PlusForm f = plus_combination(basis, ctp);
  return borcherds_product(f, S.W, C);
}

}  // namespace

BorcherdsProduct borcherds_lift(long p, const std::map<long, Rat>& ctp, long trace_prec,
                                std::optional<std::pair<Rat, Rat>> basepoint, BasisOptions opt) {
  LiftSetup S = lift_setup(p, ctp, basepoint);
  Rat C = height_for_trace(S.W, S.rho, trace_prec - 1);
  if (C < 0) C = 0;
  BorcherdsProduct P = lift_at(p, ctp, S, C, opt);
  if (P.trace_prec < trace_prec) fail(ErrorKind::Internal, "borcherds_lift: certified window smaller than requested");
  return P;
}

BorcherdsProduct borcherds_lift_height(long p, const std::map<long, Rat>& ctp, const Rat& C,
                                       std::optional<std::pair<Rat, Rat>> basepoint, BasisOptions opt) {
  if (C < 0) fail(ErrorKind::Validation, "height must be non-negative");
  LiftSetup S = lift_setup(p, ctp, basepoint);
  return lift_at(p, ctp, S, C, opt);
}

}  // namespace hmf
