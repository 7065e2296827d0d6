#include "hmf/quadfield.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <set>

namespace hmf {

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}


long vp(Int n, long ell) {
  if (n == 0) return 1L << 40;
  long e = 0;
  n = abs(n);
  while (mpz_divisible_ui_p(n.get_mpz_t(), ell)) {
    n /= ell;
    ++e;
  }
  return e;
}

}  // namespace

Int isqrt(const Int& n) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

// ---------------------------------------------------------------- elements

Rat QuadElem::norm() const {
  Rat n = (x * x - Rat(D) * y * y) / 4;
  n.canonicalize();
  return n;
}

bool QuadElem::is_integral() const {
  if (x.get_den() != 1 || y.get_den() != 1) return false;
  Int t = x.get_num() - Int(D) * y.get_num();
  return mpz_even_p(t.get_mpz_t());
}

int sign_sqrt(const Rat& a, const Rat& b, long D) {
  int sa = sgn(a), sb = sgn(b);
  if (sa >= 0 && sb >= 0) return (sa > 0 || sb > 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  Rat diff = a * a - b * b * Rat(D);
  int sd = sgn(diff);
  return sa > 0 ? sd : -sd;
}

int QuadElem::sign() const { return sign_sqrt(x, y, D); }

double QuadElem::to_double() const {
  return (x.get_d() + y.get_d() * std::sqrt(double(D))) / 2.0;
}

std::pair<Rat, Rat> QuadElem::omega_coords() const {
  Rat a = (x - y * Rat(D)) / 2;
  a.canonicalize();
  return {a, y};
}

QuadElem QuadElem::from_omega_coords(const Rat& a, const Rat& b, long D) {
  return QuadElem(2 * a + b * Rat(D), b, D);
}

static void same_field(const QuadElem& a, const QuadElem& b) {
  if (a.D != b.D) fail(ErrorKind::Internal, "quadratic elements from different fields");
}

QuadElem operator+(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  return QuadElem(a.x + b.x, a.y + b.y, a.D);
}
QuadElem operator-(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  return QuadElem(a.x - b.x, a.y - b.y, a.D);
}
QuadElem operator-(const QuadElem& a) { return QuadElem(-a.x, -a.y, a.D); }
QuadElem operator*(const QuadElem& a, const QuadElem& b) {
  same_field(a, b);
  Rat x = (a.x * b.x + Rat(a.D) * a.y * b.y) / 2;
  Rat y = (a.x * b.y + a.y * b.x) / 2;
  x.canonicalize();
  y.canonicalize();
  return QuadElem(x, y, a.D);
}
QuadElem operator*(const Rat& c, const QuadElem& a) { return QuadElem(c * a.x, c * a.y, a.D); }
QuadElem operator/(const QuadElem& a, const QuadElem& b) {
  Rat n = b.norm();
  if (n == 0) fail(ErrorKind::Internal, "division by zero in quadratic field");
  return (1 / n) * (a * b.conj());
}
QuadElem pow(const QuadElem& a, long n) {
  if (n < 0) return pow(QuadElem::from_rat(1, a.D) / a, -n);
  QuadElem r = QuadElem::from_rat(1, a.D), b = a;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

// ---------------------------------------------------------------- integers

bool is_squarefree(long n) {
  if (n == 0) return false;
  n = std::labs(n);
  for (long p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

long kronecker(const Int& a, long n) { return mpz_kronecker_si(a.get_mpz_t(), n); }

bool is_fundamental_discriminant(long D) {
  if (D == 0 || D == 1) return false;
  long m = ((D % 4) + 4) % 4;
  if (m == 1) return is_squarefree(D);
  if (m != 0) return false;
  long d = D / 4;
  long md = ((d % 4) + 4) % 4;
  return (md == 2 || md == 3) && is_squarefree(d);
}

long fundamental_discriminant(long d) {
  if (!is_squarefree(d) || d == 1) fail(ErrorKind::Validation, "d must be squarefree and != 1");
  long m = ((d % 4) + 4) % 4;
  return m == 1 ? d : 4 * d;
}

std::vector<std::pair<long, int>> factor_small(long n) {
  std::vector<std::pair<long, int>> f;
  n = std::labs(n);
  for (long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.push_back({p, e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

std::vector<std::pair<Int, int>> factor_int(Int n) {
  std::vector<std::pair<Int, int>> f;
  n = abs(n);
  if (n == 0) fail(ErrorKind::Internal, "factor_int(0)");
  for (unsigned long p = 2; Int(p) * p <= n; ++p) {
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++e;
    }
    if (e) f.push_back({Int(p), e});
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

// ---------------------------------------------------------------- ideals

void QuadIdeal::canonicalize() {
  if (a_ <= 0 || c_ <= 0) fail(ErrorKind::Internal, "degenerate ideal lattice");
  b_ = mod_pos(b_, a_);
  Int g = gcd(gcd(a_, b_), gcd(c_, den_));
  if (g != 1) {
    a_ /= g;
    b_ /= g;
    c_ /= g;
    den_ /= g;
  }
}

QuadIdeal QuadIdeal::generated(const std::vector<QuadElem>& gens, long D) {
  // Z-lattice spanned by g and g*omega for every generator.
  QuadElem omega(Rat(D), 1, D);
  std::vector<std::pair<Rat, Rat>> vecs;
  Int den = 1;
  for (auto& g : gens) {
    if (g.D != D) fail(ErrorKind::Internal, "generator from a different field");
    for (auto& e : {g, g * omega}) {
      auto c = e.omega_coords();
      den = lcm(den, lcm(c.first.get_den(), c.second.get_den()));
      vecs.push_back(c);
    }
  }
  Int a0 = 0, pb = 0, pc = 0;
  for (auto& [A, B] : vecs) {
    Int x = Rat(A * den).get_num(), y = Rat(B * den).get_num();
    if (y == 0) {
      a0 = gcd(a0, x);
      continue;
    }
    if (pc == 0) {
      pb = x;
      pc = y;
      continue;
    }
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), pc.get_mpz_t(), y.get_mpz_t());
    Int nb = s * pb + t * x;
    Int w = (y / g) * pb - (pc / g) * x;
    pb = nb;
    pc = g;
    a0 = gcd(a0, w);
  }
  if (a0 == 0 || pc == 0) fail(ErrorKind::Internal, "zero ideal");
  QuadIdeal I;
  I.D_ = D;
  I.a_ = abs(a0);
  if (pc < 0) {
    pc = -pc;
    pb = -pb;
  }
  I.b_ = pb;
  I.c_ = pc;
  I.den_ = den;
  I.canonicalize();
  return I;
}

QuadIdeal QuadIdeal::principal(const QuadElem& g) {
  if (g.is_zero()) fail(ErrorKind::Precondition, "zero ideal");
  return generated({g}, g.D);
}

Rat QuadIdeal::norm() const {
  Rat n(a_ * c_, den_ * den_);
  n.canonicalize();
  return n;
}

std::vector<QuadElem> QuadIdeal::z_basis() const {
  Rat inv(1, den_);
  inv.canonicalize();
  return {QuadElem::from_omega_coords(inv * Rat(a_), 0, D_),
          QuadElem::from_omega_coords(inv * Rat(b_), inv * Rat(c_), D_)};
}

bool QuadIdeal::contains(const QuadElem& e) const {
  auto [A, B] = e.omega_coords();
  Rat As = A * Rat(den_), Bs = B * Rat(den_);
  if (As.get_den() != 1 || Bs.get_den() != 1) return false;
  Int y = Bs.get_num();
  if (!mpz_divisible_p(y.get_mpz_t(), c_.get_mpz_t())) return false;
  Int k = y / c_;
  Int x = As.get_num() - k * b_;
  return mpz_divisible_p(x.get_mpz_t(), a_.get_mpz_t());
}

QuadIdeal QuadIdeal::conj() const {
  auto basis = z_basis();
  return generated({basis[0].conj(), basis[1].conj()}, D_);
}

QuadIdeal operator*(const QuadIdeal& x, const QuadIdeal& y) {
  if (x.D() != y.D()) fail(ErrorKind::Internal, "ideals from different fields");
  auto bx = x.z_basis(), by = y.z_basis();
  std::vector<QuadElem> g;
  for (auto& s : bx)
    for (auto& t : by) g.push_back(s * t);
  return QuadIdeal::generated(g, x.D());
}

QuadIdeal inverse(const QuadIdeal& x) {
  // I * conj(I) = (N(I)).
  Rat n = x.norm();
  QuadIdeal c = x.conj();
  return c * QuadIdeal::principal(QuadElem::from_rat(1 / n, x.D()));
}

QuadIdeal pow(const QuadIdeal& x, long n) {
  if (n < 0) return pow(inverse(x), -n);
  QuadIdeal r = QuadIdeal::unit(x.D());
  for (long i = 0; i < n; ++i) r = r * x;
  return r;
}

std::vector<PrimeIdeal> primes_above(long ell, long D) {
  // Minimal polynomial of omega: X^2 - D X + (D^2 - D)/4.
  Int c0 = (Int(D) * D - D) / 4;
  std::vector<long> roots;
  for (long r = 0; r < ell; ++r) {
    Int v = Int(r) * r - Int(D) * r + c0;
    if (mpz_divisible_ui_p(v.get_mpz_t(), ell)) roots.push_back(r);
  }
  std::vector<PrimeIdeal> out;
  auto make = [&](long r, PrimeKind kind) {
    PrimeIdeal P;
    P.ell = ell;
    P.kind = kind;
    P.root = r;
    QuadElem gen = QuadElem::from_omega_coords(Rat(-r), 1, D);
    P.ideal = QuadIdeal::generated({QuadElem::from_rat(ell, D), gen}, D);
    return P;
  };
  bool ramified = roots.size() == 1 || (roots.size() == 2 && D % ell == 0);
  if (roots.empty()) {
    PrimeIdeal P;
    P.ell = ell;
    P.kind = PrimeKind::Inert;
    P.ideal = QuadIdeal::principal(QuadElem::from_rat(ell, D));
    out.push_back(P);
  } else if (ramified) {
    out.push_back(make(roots[0], PrimeKind::Ramified));
  } else {
    for (long r : roots) out.push_back(make(r, PrimeKind::Split));
  }
  return out;
}

long valuation(const QuadIdeal& I, const PrimeIdeal& P) {
  long shift = 0;
  QuadIdeal J = I;
  // Clear the denominator: den contributes -e(P) v_ell(den).
  if (J.den() != 1) {
    long e = vp(J.den(), P.ell);
    long ram = P.kind == PrimeKind::Ramified ? 2 : 1;
    shift = -e * ram;
    J = J * QuadIdeal::principal(QuadElem::from_rat(Rat(J.den()), I.D()));
  }
  QuadIdeal Pinv = inverse(P.ideal);
  long v = 0;
  while (true) {
    QuadIdeal K = J * Pinv;
    if (!K.is_integral()) break;
    J = K;
    ++v;
  }
  return v + shift;
}

std::vector<std::pair<PrimeIdeal, long>> ideal_factor(const QuadIdeal& I) {
  std::set<long> ells;
  Int num = I.a() * I.c();
  for (auto& [p, e] : factor_int(num)) ells.insert(p.get_si());
  if (I.den() != 1)
    for (auto& [p, e] : factor_int(I.den())) ells.insert(p.get_si());
  std::vector<std::pair<PrimeIdeal, long>> out;
  for (long ell : ells)
    for (auto& P : primes_above(ell, I.D())) {
      long v = valuation(I, P);
      if (v) out.push_back({P, v});
    }
  return out;
}

std::vector<std::pair<PrimeIdeal, long>> element_factor(const QuadElem& e) {
  return ideal_factor(QuadIdeal::principal(e));
}

// ---------------------------------------------------------------- units

QuadElem fundamental_unit(long d) {
  long D = fundamental_discriminant(d);
  if (D < 0) fail(ErrorKind::Validation, "real quadratic field needs d > 1");
  // Continued fraction of (P0 + sqrt D)/2 with Z[alpha] = O_F; the product of the
  // complete quotients over one period is the fundamental unit.
  Int P = D % 2 ? 1 : 0, Q = 2;
  Int s = isqrt(Int(D));
  std::map<std::pair<Int, Int>, size_t> seen;
  std::vector<std::pair<Int, Int>> states;
  while (true) {
    auto key = std::make_pair(P, Q);
    auto it = seen.find(key);
    if (it != seen.end()) {
      QuadElem eps = QuadElem::from_rat(1, D);
      for (size_t i = it->second; i < states.size(); ++i) {
        auto& [Pi, Qi] = states[i];
        eps = eps * QuadElem(make_rat(2 * Pi, Qi), make_rat(2, Qi), D);
      }
      if (eps.sign() < 0) eps = -eps;
      return eps;
    }
    seen[key] = states.size();
    states.push_back(key);
    Int a;
    if (Q > 0)
      a = floor_div(P + s, Q);
    else
      a = floor_div(P + s + 1, Q);
    P = a * Q - P;
    Q = (Int(D) - P * P) / Q;
  }
}

QuadElem fundamental_unit_bruteforce(long d, long ybound) {
  long D = fundamental_discriminant(d);
  for (long y = 1; y <= ybound; ++y) {
    for (int s : {-4, 4}) {
      Int t = Int(D) * y * y + s;
      if (is_square(t)) return QuadElem(Rat(isqrt(t)), y, D);
    }
  }
  fail(ErrorKind::Internal, "no unit found in search window");
}

QuadField QuadField::from_d(long d) {
  QuadField F;
  F.d_ = d;
  F.D_ = fundamental_discriminant(d);
  if (d <= 1) fail(ErrorKind::Validation, "real quadratic field needs d > 1");
  F.eps0_ = fundamental_unit(d);
  F.eps_norm_ = F.eps0_.norm() > 0 ? 1 : -1;
  if (abs(F.eps0_.norm()) != 1) fail(ErrorKind::Internal, "fundamental unit has norm != +-1");
  return F;
}

QuadField QuadField::from_disc(long D) {
  if (!is_fundamental_discriminant(D) || D < 5)
    fail(ErrorKind::Validation, "not a real quadratic fundamental discriminant: " + std::to_string(D));
  return from_d(D % 4 == 0 ? D / 4 : D);
}

static bool is_principal(const PrimeIdeal& P, const QuadField& F) {
  long D = F.D();
  Int N = P.abs_norm();
  double bound = 2.0 * (F.eps0().to_double() + 1.0) * std::sqrt(N.get_d()) / std::sqrt(double(D)) + 2;
  for (long y = 0; y <= (long)bound; ++y)
    for (int sgn4 : {-4, 4}) {
      Int t = Int(D) * y * y + sgn4 * N;
      if (!is_square(t)) continue;
      Int x = isqrt(t);
      for (int sx : {1, -1}) {
        QuadElem a(Rat(sx * x), y, D);
        if (a.is_integral() && P.ideal.contains(a)) return true;
      }
    }
  return false;
}

bool QuadField::class_number_one() const {
  // Minkowski bound sqrt(D)/2: every class has an integral ideal of smaller norm.
  long mb = (long)std::floor(std::sqrt(double(D_)) / 2.0);
  for (long ell = 2; ell <= mb; ++ell) {
    if (factor_small(ell).size() != 1 || factor_small(ell)[0].second != 1) continue;
    for (auto& P : primes_above(ell, D_))
      if (P.abs_norm() <= mb && !is_principal(P, *this)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- dual lattice

QuadElem dual_to_elem(const DualIndex& n, long D) {
  // (u + v sqrt D)/(2 sqrt D) = (v + (u/D) sqrt D)/2.
  Rat y(n.u, D);
  y.canonicalize();
  return QuadElem(Rat(n.v), y, D);
}

DualIndex elem_to_dual(const QuadElem& e) {
  Rat u = e.y * Rat(e.D);
  if (u.get_den() != 1 || e.x.get_den() != 1) fail(ErrorKind::Internal, "element not in the inverse different");
  DualIndex n{u.get_num().get_si(), e.x.get_num().get_si()};
  if (((n.u - long(e.D) * n.v) % 2 + 2) % 2 != 0) fail(ErrorKind::Internal, "element not in the inverse different");
  return n;
}

bool in_dual(const QuadElem& e) {
  Rat u = e.y * Rat(e.D);
  if (u.get_den() != 1 || e.x.get_den() != 1) return false;
  Int t = u.get_num() - Int(e.D) * e.x.get_num();
  return mpz_even_p(t.get_mpz_t());
}

Int dual_scaled_norm(const DualIndex& n, long D) {
  return (Int(D) * n.v * n.v - Int(n.u) * n.u) / 4;
}

bool dual_totally_positive(const DualIndex& n, long D) {
  return n.v > 0 && Int(n.u) * n.u < Int(D) * n.v * n.v;
}

DualIndex dual_mul_unit(const DualIndex& n, const QuadElem& unit) {
  Rat u = (Rat(n.u) * unit.x + Rat(unit.D) * Rat(n.v) * unit.y) / 2;
  Rat v = (Rat(n.u) * unit.y + Rat(n.v) * unit.x) / 2;
  u.canonicalize();
  v.canonicalize();
  if (u.get_den() != 1 || v.get_den() != 1) fail(ErrorKind::Internal, "unit multiple left the lattice");
  return {u.get_num().get_si(), v.get_num().get_si()};
}

std::vector<DualIndex> enum_tp_dual(const QuadField& F, long trace_bound) {
  std::vector<DualIndex> out{{0, 0}};
  long D = F.D();
  for (long v = 1; v <= trace_bound; ++v) {
    Int lim = isqrt(Int(D) * v * v);
    long L = lim.get_si();
    for (long u = -L; u <= L; ++u) {
      if (((u - D * v) % 2 + 2) % 2) continue;
      DualIndex n{u, v};
      if (dual_totally_positive(n, D)) out.push_back(n);
    }
  }
  return out;
}

// ---------------------------------------------------------------- divisor sums

static Rat sigma_from_factors(long s, const std::vector<std::pair<Int, long>>& norm_exps) {
  Int acc = 1;
  for (auto& [NP, e] : norm_exps) {
    if (e < 0) fail(ErrorKind::Precondition, "sigma of a non-integral ideal");
    Int term = 0, pw = 1, step;
    mpz_pow_ui(step.get_mpz_t(), NP.get_mpz_t(), s);
    for (long i = 0; i <= e; ++i) {
      term += pw;
      pw *= step;
    }
    acc *= term;
  }
  return Rat(acc);
}

Rat sigma_ideal(long s, const QuadIdeal& I) {
  if (!I.is_integral()) fail(ErrorKind::Precondition, "sigma of a non-integral ideal");
  std::vector<std::pair<Int, long>> ne;
  for (auto& [P, e] : ideal_factor(I)) ne.push_back({P.abs_norm(), e});
  return sigma_from_factors(s, ne);
}

Rat sigma_dual(long s, const DualIndex& n, long D) {
  // sqrt(D) nu = (u + v sqrt D)/2, integral. Exponents per prime follow from the
  // norm and the content of the element in the basis 1, omega.
  Int N = abs(Int(n.u) * n.u - Int(D) * n.v * n.v) / 4;
  if (N == 0) fail(ErrorKind::Precondition, "sigma of the zero ideal");
  QuadElem g(Rat(n.u), Rat(n.v), D);
  auto [A, B] = g.omega_coords();
  Int content = gcd(A.get_num(), B.get_num());
  std::vector<std::pair<Int, long>> ne;
  for (auto& [pz, e] : factor_int(N)) {
    long ell = pz.get_si();
    long kr = kronecker(Int(D), ell);
    if (kr == 0) {
      ne.push_back({Int(ell), e});
    } else if (kr == -1) {
      ne.push_back({Int(ell) * ell, e / 2});
    } else {
      long g1 = vp(content, ell);
      ne.push_back({Int(ell), g1});
      ne.push_back({Int(ell), e - g1});
    }
  }
  return sigma_from_factors(s, ne);
}

Rat siegel_zeta(long D, long k) {
  if (!is_fundamental_discriminant(D) || D < 5)
    fail(ErrorKind::Validation, "not a real quadratic discriminant: " + std::to_string(D));
  if (k != 2 && k != 4) fail(ErrorKind::Validation, "siegel_zeta supports k = 2 or 4");
  Int acc = 0;
  long s = isqrt(Int(D)).get_si();
  for (long x = -s; x <= s; ++x) {
    if (x * x >= D || ((x * x - D) % 4 + 4) % 4) continue;
    acc += divisor_sigma(k - 1, (D - x * x) / 4);
  }
  Rat r(acc, k == 2 ? 60 : 120);
  r.canonicalize();
  return r;
}

Rat generalized_bernoulli(long k, long D) {
  long f = std::labs(D);
  Rat s = 0;
  for (long a = 1; a <= f; ++a) {
    long chi = kronecker(Int(D), a);
    if (chi) s += Rat(chi) * bernoulli_poly(k, make_rat(a, f));
  }
  Int fk;
  mpz_ui_pow_ui(fk.get_mpz_t(), f, k - 1);
  s *= Rat(fk);
  s.canonicalize();
  return s;
}

Rat dedekind_zeta_negative(long D, long k) {
  if (!is_fundamental_discriminant(D) || D < 5)
    fail(ErrorKind::Validation, "not a real quadratic discriminant: " + std::to_string(D));
  if (k < 2 || k % 2) fail(ErrorKind::Validation, "k must be even and >= 2");
  Rat r = bernoulli(k) * generalized_bernoulli(k, D) / Rat(k * k);
  r.canonicalize();
  return r;
}

}  // namespace hmf
