#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hmf/qseries.hpp"

namespace hmf {

/// Element (x + y sqrt(D))/2 of the real quadratic field of discriminant D.
struct QuadElem {
  Rat x, y;
  long D = 0;

  QuadElem() = default;
  QuadElem(Rat x_, Rat y_, long D_) : x(std::move(x_)), y(std::move(y_)), D(D_) {}
  static QuadElem from_rat(const Rat& r, long D) { return QuadElem(2 * r, 0, D); }
  static QuadElem sqrtD(long D) { return QuadElem(0, 2, D); }

  Rat trace() const { return x; }
  Rat norm() const;
  QuadElem conj() const { return QuadElem(x, -y, D); }
  bool is_zero() const { return x == 0 && y == 0; }
  bool is_integral() const;
  // Sign of the first (identity) embedding.
  int sign() const;
  int sign_conj() const { return conj().sign(); }
  bool totally_positive() const { return sign() > 0 && sign_conj() > 0; }
  double to_double() const;

  // Coordinates with respect to the integral basis 1, omega = (D + sqrt D)/2.
  std::pair<Rat, Rat> omega_coords() const;
  static QuadElem from_omega_coords(const Rat& a, const Rat& b, long D);

  bool operator==(const QuadElem& o) const { return D == o.D && x == o.x && y == o.y; }
  bool operator!=(const QuadElem& o) const { return !(*this == o); }
};

QuadElem operator+(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a, const QuadElem& b);
QuadElem operator-(const QuadElem& a);
QuadElem operator*(const QuadElem& a, const QuadElem& b);
QuadElem operator*(const Rat& c, const QuadElem& a);
QuadElem operator/(const QuadElem& a, const QuadElem& b);
QuadElem pow(const QuadElem& a, long n);

// Sign of a + b sqrt(D) computed exactly.
int sign_sqrt(const Rat& a, const Rat& b, long D);

bool is_squarefree(long n);
Int isqrt(const Int& n);
bool is_square(const Int& n);
long kronecker(const Int& a, long n);
long fundamental_discriminant(long d);
bool is_fundamental_discriminant(long D);
std::vector<std::pair<long, int>> factor_small(long n);
std::vector<std::pair<Int, int>> factor_int(Int n);

enum class PrimeKind { Split, Inert, Ramified };

/// Fractional ideal (1/den) * (a Z + (b + c omega) Z), a,b,c integers in HNF.
class QuadIdeal {
 public:
  QuadIdeal() = default;
  static QuadIdeal principal(const QuadElem& g);
  static QuadIdeal generated(const std::vector<QuadElem>& gens, long D);
  static QuadIdeal unit(long D) { return principal(QuadElem::from_rat(1, D)); }

  long D() const { return D_; }
  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }
  const Int& den() const { return den_; }
  Rat norm() const;
  bool is_integral() const { return den_ == 1; }
  bool contains(const QuadElem& e) const;
  QuadIdeal conj() const;
  std::vector<QuadElem> z_basis() const;

  bool operator==(const QuadIdeal& o) const {
    return D_ == o.D_ && a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && den_ == o.den_;
  }
  bool operator!=(const QuadIdeal& o) const { return !(*this == o); }

 private:
  friend QuadIdeal operator*(const QuadIdeal&, const QuadIdeal&);
  void canonicalize();
  long D_ = 0;
  Int a_ = 1, b_ = 0, c_ = 1, den_ = 1;
};

QuadIdeal operator*(const QuadIdeal& x, const QuadIdeal& y);
QuadIdeal inverse(const QuadIdeal& x);
QuadIdeal pow(const QuadIdeal& x, long n);

struct PrimeIdeal {
  long ell = 0;
  PrimeKind kind = PrimeKind::Inert;
  long root = -1;  // r in (ell, omega - r); -1 for inert primes
  QuadIdeal ideal;
  long residue_degree() const { return kind == PrimeKind::Inert ? 2 : 1; }
  Int abs_norm() const { return kind == PrimeKind::Inert ? Int(ell) * ell : Int(ell); }
  bool operator==(const PrimeIdeal& o) const { return ideal == o.ideal; }
  bool operator<(const PrimeIdeal& o) const { return ell != o.ell ? ell < o.ell : root < o.root; }
};

std::vector<PrimeIdeal> primes_above(long ell, long D);
std::vector<std::pair<PrimeIdeal, long>> ideal_factor(const QuadIdeal& I);
std::vector<std::pair<PrimeIdeal, long>> element_factor(const QuadElem& e);
long valuation(const QuadIdeal& I, const PrimeIdeal& P);

class QuadField {
 public:
  static QuadField from_d(long d);
  static QuadField from_disc(long D);

  long d() const { return d_; }
  long D() const { return D_; }
  const QuadElem& eps0() const { return eps0_; }
  int eps_norm() const { return eps_norm_; }
  // Totally positive generator of the squares of units, eps0^2.
  QuadElem eps0_sq() const { return eps0_ * eps0_; }
  bool class_number_one() const;

 private:
  long d_ = 0, D_ = 0;
  QuadElem eps0_;
  int eps_norm_ = 1;
};

QuadElem fundamental_unit(long d);
QuadElem fundamental_unit_bruteforce(long d, long ybound);

/// Element nu = (u + v sqrt D)/(2 sqrt D) of the inverse different.
struct DualIndex {
  long u = 0, v = 0;
  bool operator<(const DualIndex& o) const { return v != o.v ? v < o.v : u < o.u; }
  bool operator==(const DualIndex& o) const { return u == o.u && v == o.v; }
  DualIndex operator+(const DualIndex& o) const { return {u + o.u, v + o.v}; }
  DualIndex operator-(const DualIndex& o) const { return {u - o.u, v - o.v}; }
  DualIndex conj() const { return {-u, v}; }
};

QuadElem dual_to_elem(const DualIndex& n, long D);
DualIndex elem_to_dual(const QuadElem& e);
bool in_dual(const QuadElem& e);
// D * nu * nu' = (D v^2 - u^2)/4.
Int dual_scaled_norm(const DualIndex& n, long D);
bool dual_totally_positive(const DualIndex& n, long D);
DualIndex dual_mul_unit(const DualIndex& n, const QuadElem& unit);

/// All totally positive nu in d^{-1} with tr(nu) <= trace_bound, plus nu = 0.
std::vector<DualIndex> enum_tp_dual(const QuadField& F, long trace_bound);

Rat sigma_ideal(long s, const QuadIdeal& I);
// sigma_s of the integral ideal generated by sqrt(D) * nu.
Rat sigma_dual(long s, const DualIndex& n, long D);

Rat siegel_zeta(long D, long k);
// zeta_F(1-k) = zeta(1-k) L(1-k, chi_D) from generalized Bernoulli numbers.
Rat dedekind_zeta_negative(long D, long k);
Rat generalized_bernoulli(long k, long D);

}  // namespace hmf
