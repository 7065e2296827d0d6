#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "hmf/lifts.hpp"
#include "hmf/plusspace.hpp"
#include "hmf/quadfield.hpp"

namespace hmf {

/// Chamber in the positive quadrant cut out by the hyperplanes of S(m), m in m_set,
/// represented by a rational basepoint (w1, w2) off every wall.
struct WeylChamber {
  long D = 0;
  std::set<long> m_set;
  Rat w1, w2;
};

WeylChamber chamber_of(const QuadField& F, const std::set<long>& m_set, const Rat& w1, const Rat& w2);

// (lambda, W) = lambda w1 + lambda' w2 as an element of F.
QuadElem pair_with(const DualIndex& lambda, const WeylChamber& W);
// Sign of (lambda, W) - c, exact.
int compare_height(const DualIndex& lambda, const WeylChamber& W, const Rat& c);

/// All (u, v) with u^2 - D v^2 = 4m, |u| <= ubound (lambda = (u + v sqrt D)/(2 sqrt D)).
std::vector<DualIndex> norm_solutions(long D, long m, long ubound);

struct ReducedSet {
  long m = 0;
  WeylChamber chamber;
  std::vector<QuadElem> lambdas;
};
ReducedSet reduced_set(long m, const WeylChamber& W);
QuadElem weyl_vector(long m, const WeylChamber& W);

struct LocalBorcherdsData {
  QuadElem weyl_vector;
  std::vector<QuadElem> lambdas;  // (lambda, W) > 0 and (lambda, W) <= bound
};
LocalBorcherdsData local_borcherds_data(long m, const WeylChamber& W, const Rat& bound);

/// Truncated Borcherds product q^rho prod (1 - q^nu)^{ctilde(p nu nu')}.
/// terms are keyed by nu - rho (the exponent before the Weyl prefactor) and are exact for
/// every key with (key, W) <= C.
struct BorcherdsProduct {
  long D = 0;
  WeylChamber chamber;
  Rat C;
  Rat weight;
  QuadElem rho;
  std::vector<std::pair<long, long>> divisor;  // (m, multiplicity of T_m)
  std::map<DualIndex, Int> terms;
  long trace_prec = 0;  // totally positive exponents with trace below this are certified
  bool holomorphic = true;

  /// Folds in the Weyl vector; requires rho in the inverse different and a holomorphic product.
  HilbertQExpansion to_hilbert() const;
};

BorcherdsProduct borcherds_product(const PlusForm& f, const WeylChamber& W, const Rat& C);

/// Height bound that certifies all totally positive exponents with trace <= T.
Rat height_for_trace(const WeylChamber& W, const QuadElem& rho, long T);
/// Coefficient bound of f needed by a product at height C.
long borcherds_required_prec(const WeylChamber& W, const Rat& C, long pole_order);

/// Builds f from its principal part and lifts it, certified for trace < trace_prec.
/// Basepoint defaults to (2, 3).
BorcherdsProduct borcherds_lift(long p, const std::map<long, Rat>& ctilde_principal, long trace_prec,
                                std::optional<std::pair<Rat, Rat>> basepoint = std::nullopt,
                                BasisOptions opt = {});
/// Same, but for a given height C instead of a trace window.
BorcherdsProduct borcherds_lift_height(long p, const std::map<long, Rat>& ctilde_principal, const Rat& C,
                                       std::optional<std::pair<Rat, Rat>> basepoint = std::nullopt,
                                       BasisOptions opt = {});

}  // namespace hmf
