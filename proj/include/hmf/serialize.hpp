#pragma once

#include <json.hpp>

#include "hmf/borcherds.hpp"
#include "hmf/cmvalues.hpp"
#include "hmf/lifts.hpp"
#include "hmf/plusspace.hpp"
#include "hmf/qseries.hpp"

namespace hmf {

// Insertion-ordered so output follows the (sorted) order in which we emit keys.
using Json = nlohmann::ordered_json;

Json to_json(const QSeries& s);
QSeries qseries_from_json(const Json& j);

// Plus forms carry "m" = pole order, so a basis list is keyed by (p, m, prec).
Json to_json(const PlusForm& f);
PlusForm plusform_from_json(const Json& j);

Json to_json(const QuadElem& e);
Json to_json(const HilbertQExpansion& h);
Json divisor_json(const std::vector<std::pair<long, long>>& divisor);
Json to_json(const BorcherdsProduct& P);
Json to_json(const CMValue& v);

/// "m1:c1,m2:c2" -> {m: c}; malformed input is a validation error.
std::map<long, Rat> parse_coeff_list(const std::string& s);

}  // namespace hmf
