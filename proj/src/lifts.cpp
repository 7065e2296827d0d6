#include "hmf/lifts.hpp"

#include <set>

#include "hmf/borcherds.hpp"

namespace hmf {

const char* parity_name(Parity p) {
  switch (p) {
    case Parity::Symmetric: return "symmetric";
    case Parity::Antisymmetric: return "antisymmetric";
    default: return "unknown";
  }
}

Rat HilbertQExpansion::coeff(const DualIndex& n) const {
  if (n.u == 0 && n.v == 0) return const_term;
  auto it = coeffs.find(n);
  return it == coeffs.end() ? Rat(0) : it->second;
}

void HilbertQExpansion::set(const DualIndex& n, const Rat& c) {
  if (n.u == 0 && n.v == 0) {
    const_term = c;
    return;
  }
  if (c == 0)
    coeffs.erase(n);
  else
    coeffs[n] = c;
}

namespace {

void same_space(const HilbertQExpansion& a, const HilbertQExpansion& b, const char* what) {
  if (a.D != b.D) fail(ErrorKind::Validation, std::string(what) + ": fields differ");
}

HilbertQExpansion combine(const HilbertQExpansion& a, const HilbertQExpansion& b, int sign) {
  same_space(a, b, "hilbert sum");
  if (a.weight != b.weight && !a.is_zero() && !b.is_zero())
    fail(ErrorKind::Validation, "hilbert sum: weights differ");
  HilbertQExpansion r;
  r.D = a.D;
  r.weight = a.is_zero() ? b.weight : a.weight;
  r.trace_prec = std::min(a.trace_prec, b.trace_prec);
  r.const_term = a.const_term + sign * b.const_term;
  for (auto& [k, c] : a.coeffs)
    if (k.v < r.trace_prec) r.set(k, c);
  for (auto& [k, c] : b.coeffs)
    if (k.v < r.trace_prec) r.set(k, r.coeff(k) + sign * c);
  r.parity = detect_parity(r);
  return r;
}

}  // namespace

HilbertQExpansion operator+(const HilbertQExpansion& a, const HilbertQExpansion& b) {
  return combine(a, b, 1);
}
HilbertQExpansion operator-(const HilbertQExpansion& a, const HilbertQExpansion& b) {
  return combine(a, b, -1);
}

HilbertQExpansion operator*(const Rat& c, const HilbertQExpansion& a) {
  HilbertQExpansion r = a;
  r.coeffs.clear();
  r.const_term = c * a.const_term;
  if (c != 0)
    for (auto& [k, x] : a.coeffs) r.coeffs[k] = c * x;
  r.parity = detect_parity(r);
  return r;
}

HilbertQExpansion operator*(const HilbertQExpansion& a, const HilbertQExpansion& b) {
  same_space(a, b, "hilbert product");
  HilbertQExpansion r;
  r.D = a.D;
  r.weight = a.weight + b.weight;
  r.trace_prec = std::min(a.trace_prec, b.trace_prec);
  std::vector<std::pair<DualIndex, Rat>> ta{{DualIndex{0, 0}, a.const_term}}, tb{{DualIndex{0, 0}, b.const_term}};
  for (auto& kv : a.coeffs) ta.push_back(kv);
  for (auto& kv : b.coeffs) tb.push_back(kv);
  std::map<DualIndex, Rat> acc;
  for (auto& [ka, ca] : ta) {
    if (ca == 0 || ka.v >= r.trace_prec) continue;
    for (auto& [kb, cb] : tb) {
      if (cb == 0 || ka.v + kb.v >= r.trace_prec) continue;
      acc[ka + kb] += ca * cb;
    }
  }
  for (auto& [k, c] : acc) r.set(k, c);
  r.parity = detect_parity(r);
  return r;
}

HilbertQExpansion pow(const HilbertQExpansion& a, long n) {
  if (n < 0) fail(ErrorKind::Validation, "hilbert pow: negative exponent");
  HilbertQExpansion r;
  r.D = a.D;
  r.trace_prec = a.trace_prec;
  r.const_term = 1;
  r.parity = Parity::Symmetric;
  HilbertQExpansion b = a;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

HilbertQExpansion truncate_trace(const HilbertQExpansion& a, long trace_prec) {
  HilbertQExpansion r = a;
  r.trace_prec = std::min(a.trace_prec, trace_prec);
  for (auto it = r.coeffs.begin(); it != r.coeffs.end();)
    it = it->first.v >= r.trace_prec ? r.coeffs.erase(it) : std::next(it);
  return r;
}

Parity detect_parity(const HilbertQExpansion& h) {
  bool sym = true, anti = h.const_term == 0;
  for (auto& [k, c] : h.coeffs) {
    Rat c2 = h.coeff(k.conj());
    if (c2 != c) sym = false;
    if (c2 != -c) anti = false;
  }
  if (sym) return Parity::Symmetric;
  if (anti) return Parity::Antisymmetric;
  return Parity::Unknown;
}

void check_invariants(const HilbertQExpansion& h, const QuadField& F) {
  if (F.D() != h.D) fail(ErrorKind::Internal, "hilbert expansion: field mismatch");
  for (auto& [k, c] : h.coeffs) {
    if (!dual_totally_positive(k, h.D) || !in_dual(dual_to_elem(k, h.D)))
      fail(ErrorKind::Internal, "hilbert expansion: key not totally positive in the inverse different");
    if (k.v >= h.trace_prec) fail(ErrorKind::Internal, "hilbert expansion: key outside the window");
  }
  QuadElem e2 = F.eps0_sq();
  // a_{eps^2 nu} = N(eps)^k a_nu; only odd weight with a unit of norm -1 picks up a sign.
  int sgn = (F.eps_norm() < 0 && h.weight % 2) ? -1 : 1;
  for (auto& k : enum_tp_dual(F, h.trace_prec - 1)) {
    if (k.v == 0) continue;
    DualIndex m = dual_mul_unit(k, e2);
    if (m.v < h.trace_prec && h.coeff(m) != sgn * h.coeff(k))
      fail(ErrorKind::Internal, "hilbert expansion: unit invariance fails at (" + std::to_string(k.u) +
                                    "," + std::to_string(k.v) + ")");
  }
  Parity p = detect_parity(h);
  if (h.parity != Parity::Unknown && p != h.parity && !(h.is_zero()))
    fail(ErrorKind::Internal, std::string("hilbert expansion: recorded parity ") + parity_name(h.parity) +
                                  " does not hold on the window");
}

std::optional<Rat> proportionality(const HilbertQExpansion& a, const HilbertQExpansion& b) {
  long T = std::min(a.trace_prec, b.trace_prec);
  std::set<DualIndex> keys{DualIndex{0, 0}};
  for (auto& kv : a.coeffs)
    if (kv.first.v < T) keys.insert(kv.first);
  for (auto& kv : b.coeffs)
    if (kv.first.v < T) keys.insert(kv.first);
  std::optional<Rat> c;
  for (auto& k : keys) {
    Rat x = a.coeff(k), y = b.coeff(k);
    if (y == 0) {
      if (x != 0) return std::nullopt;
      continue;
    }
    if (!c) c = x / y;
    if (x != *c * y) return std::nullopt;
  }
  if (!c) return Rat(0);
  return c;
}

HilbertQExpansion doi_naganuma(const PlusForm& f, long trace_prec) {
  if (f.pole_order != 0) fail(ErrorKind::Precondition, "doi_naganuma: f must be holomorphic at the cusps");
  long p = f.p;
  QuadField F = QuadField::from_disc(p);
  long need = p * (trace_prec - 1) * (trace_prec - 1) / 4 + 1;
  if (trace_prec > 1 && f.prec() < need)
    fail(ErrorKind::Precondition, "doi_naganuma: f known below q^" + std::to_string(f.prec()) +
                                      ", need precision " + std::to_string(need));
  long k = f.weight;
  HilbertQExpansion h;
  h.D = p;
  h.weight = k;
  h.trace_prec = trace_prec;
  h.const_term = -bernoulli(k) / (2 * k) * f.ctilde(0);
  for (auto& nu : enum_tp_dual(F, trace_prec - 1)) {
    if (nu.v == 0) continue;
    Rat s = 0;
    for (long d = 1; d <= nu.v; ++d) {
      if (nu.u % d || nu.v % d) continue;
      DualIndex q{nu.u / d, nu.v / d};
      if (!in_dual(dual_to_elem(q, p))) continue;
      Int n = dual_scaled_norm(q, p);
      Int dk;
      mpz_pow_ui(dk.get_mpz_t(), Int(d).get_mpz_t(), k - 1);
      s += Rat(dk) * f.ctilde(n.get_si());
    }
    h.set(nu, s);
  }
  h.parity = detect_parity(h);
  check_invariants(h, F);
  return h;
}

HilbertQExpansion hilbert_eisenstein(const QuadField& F, long k, long trace_prec, std::optional<Rat> zeta_value) {
  if (k < 2 || k % 2) fail(ErrorKind::Validation, "hilbert_eisenstein: k must be even and >= 2");
  if (!F.class_number_one()) fail(ErrorKind::Precondition, "hilbert_eisenstein: class number of F is not 1");
  Rat z = zeta_value ? *zeta_value : (k <= 4 ? siegel_zeta(F.D(), k) : dedekind_zeta_negative(F.D(), k));
  HilbertQExpansion h;
  h.D = F.D();
  h.weight = k;
  h.trace_prec = trace_prec;
  h.const_term = 1;
  Rat scale = 4 / z;
  for (auto& nu : enum_tp_dual(F, trace_prec - 1)) {
    if (nu.v == 0) continue;
    h.set(nu, scale * sigma_dual(k - 1, nu, F.D()));
  }
  h.parity = detect_parity(h);
  check_invariants(h, F);
  return h;
}

QSeries restrict_diagonal(const HilbertQExpansion& h) {
  QSeries g(0, std::max(h.trace_prec, 1L));
  g.set(0, h.const_term);
  for (auto& [k, c] : h.coeffs)
    if (k.v < h.trace_prec) g.add_to(k.v, c);
  return g;
}

namespace {

Rat pw(long b, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return Rat(r);
}

}  // namespace

HilbertQExpansion gundlach(const std::string& generator, long trace_prec) {
  QuadField F = QuadField::from_disc(5);
  auto g = [&](long k) { return hilbert_eisenstein(F, k, trace_prec); };
  HilbertQExpansion r;
  if (generator == "g2") {
    r = g(2);
  } else if (generator == "g6") {
    r = g(6);
  } else if (generator == "g10") {
    r = g(10);
  } else if (generator == "s6") {
    HilbertQExpansion g2 = g(2);
    r = (Rat(67) / (pw(2, 5) * pw(3, 3) * pw(5, 2))) * (pow(g2, 3) - g(6));
  } else if (generator == "s10") {
    HilbertQExpansion g2 = g(2), g6 = g(6), g10 = g(10);
    Rat c = 1 / (pw(2, 10) * pw(3, 5) * pw(5, 5) * 7);
    r = c * (Rat(4 * 3 * 7 * 4231) * pow(g2, 5) - Rat(5 * 67 * 2293) * (pow(g2, 2) * g6) + Rat(412751) * g10);
  } else if (generator == "s5" || generator == "s15") {
    long m = generator == "s5" ? 1 : 5;
    r = borcherds_lift(5, {{m, Rat(1)}}, trace_prec).to_hilbert();
  } else {
    fail(ErrorKind::Validation, "gundlach: unknown generator '" + generator + "'");
  }
  r.parity = detect_parity(r);
  check_invariants(r, F);
  return r;
}

}  // namespace hmf
