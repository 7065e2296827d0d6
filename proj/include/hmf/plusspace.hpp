#pragma once

#include <map>
#include <string>
#include <vector>

#include "hmf/qseries.hpp"

namespace hmf {

/// Elliptic form in M_k^+(p, chi_p) or W_k^+(p, chi_p).
struct PlusForm {
  QSeries series;
  long weight = 0;
  long p = 0;
  long pole_order = 0;
  bool plus_flag = true;

  Rat c(long n) const { return series.coeff(n); }
  // Doubled at multiples of p.
  Rat ctilde(long n) const;
  // Largest certified exponent + 1.
  long prec() const { return series.prec(); }
  std::map<long, Rat> principal_part() const;
};

PlusForm make_plus_form(QSeries s, long weight, long p);
// Throws if some coefficient with chi_p(n) = -1 is nonzero.
void check_plus_condition(const PlusForm& f);

long chi_p(long p, long n);
bool is_prime(long n);
void require_plus_prime(long p);

/// L(1-k, chi_p) = -B_{k,chi_p}/k.
Rat dirichlet_L_value(long p, long k);

QSeries eisenstein_G(long p, long k, long prec);
QSeries eisenstein_H(long p, long k, long prec);
/// E_k^{+-} = 1 + (2/L(1-k)) sum_n sum_{d|n} d^{k-1} (chi(d) +- chi(n/d)) q^n.
PlusForm eisenstein_plus(long p, long k, int sign, long prec);

/// <f,g> = sum_n sum_m ctilde_f(m) b(pn - m) q^n, returned to its exact precision.
QSeries pairing(const PlusForm& f, const PlusForm& g);
/// Same, but fails naming the limiting input when out_prec cannot be reached.
QSeries pairing(const PlusForm& f, const PlusForm& g, long out_prec);

struct ObstructionResult {
  bool ok = true;
  Rat constant_term;
};
ObstructionResult obstruction_check(long p, const std::map<long, Rat>& principal_part);

/// dim M_k(Gamma_0(p), chi_p) for even k >= 2.
long dim_Mk_chi(long p, long k);

struct BasisOptions {
  // p = 13 and p = 17 are only rank-checked, never golden-checked.
  bool allow_unvalidated_p = false;
};

/// f_m for 1 <= m <= m_max with chi_p(m) != -1, each exact below prec.
std::vector<PlusForm> w0plus_basis(long p, long m_max, long prec, BasisOptions opt = {});
/// f_m straight from the Delta(p tau)^a Delta(tau)^b multiplier linear system (no ladder).
PlusForm w0plus_form_direct(long p, long m, long prec);
/// sum_m a_m f_m for a principal part {-m: a_m}, taken in the plus-space normalization
/// where ctilde(-m) = a_m.
PlusForm plus_combination(const std::vector<PlusForm>& basis, const std::map<long, Rat>& ctilde_principal);

// Version tag of the construction, part of the on-disk cache key.
inline constexpr const char* kBasisMethodVersion = "delta-multiplier+jp-ladder/2";

}  // namespace hmf
