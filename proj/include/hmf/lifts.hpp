#pragma once

#include <map>
#include <optional>
#include <string>

#include "hmf/plusspace.hpp"
#include "hmf/quadfield.hpp"

namespace hmf {

enum class Parity { Symmetric, Antisymmetric, Unknown };
const char* parity_name(Parity p);

/// Hilbert modular q-expansion a_0 + sum a_nu q1^nu q2^nu' over totally positive nu in
/// d^{-1}, exact for tr(nu) < trace_prec. Keys are (u, v) coordinates of nu.
struct HilbertQExpansion {
  long D = 0;
  long weight = 0;
  long trace_prec = 0;
  Rat const_term = 0;
  std::map<DualIndex, Rat> coeffs;
  Parity parity = Parity::Unknown;

  Rat coeff(const DualIndex& n) const;
  void set(const DualIndex& n, const Rat& c);
  bool is_zero() const { return const_term == 0 && coeffs.empty(); }
};

HilbertQExpansion operator+(const HilbertQExpansion& a, const HilbertQExpansion& b);
HilbertQExpansion operator-(const HilbertQExpansion& a, const HilbertQExpansion& b);
HilbertQExpansion operator*(const Rat& c, const HilbertQExpansion& a);
// Convolution over totally positive indices; weights add, trace_prec is the minimum.
HilbertQExpansion operator*(const HilbertQExpansion& a, const HilbertQExpansion& b);
HilbertQExpansion pow(const HilbertQExpansion& a, long n);
HilbertQExpansion truncate_trace(const HilbertQExpansion& a, long trace_prec);

/// Parity measured on the window (never assumed).
Parity detect_parity(const HilbertQExpansion& h);
/// Checks a_{eps0^2 nu} = N(eps0)^k a_nu for all key pairs inside the window, and the recorded parity.
void check_invariants(const HilbertQExpansion& h, const QuadField& F);
/// c with a = c b on the common window, if it exists.
std::optional<Rat> proportionality(const HilbertQExpansion& a, const HilbertQExpansion& b);

HilbertQExpansion doi_naganuma(const PlusForm& f, long trace_prec);
/// g_k = 1 + (4/zeta_F(1-k)) sum sigma_{k-1}(d nu) q^nu, for class number one.
HilbertQExpansion hilbert_eisenstein(const QuadField& F, long k, long trace_prec,
                                     std::optional<Rat> zeta_value = std::nullopt);
QSeries restrict_diagonal(const HilbertQExpansion& h);

/// Gundlach generators for Q(sqrt 5): g2, g6, g10, s6, s10, s5, s15.
HilbertQExpansion gundlach(const std::string& generator, long trace_prec);

}  // namespace hmf
