#include "hmf/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace hmf {

namespace {

Json rat_json(const Rat& r) {
  if (r.get_den() == 1 && r.get_num().fits_slong_p()) return r.get_num().get_si();
  return rat_str(r);
}

long get_long(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    fail(ErrorKind::Validation, std::string("json: missing integer field '") + key + "'");
  return j[key].get<long>();
}

}  // namespace

Json to_json(const QSeries& s) {
  Json c = Json::object();
  for (auto& [e, x] : s.coeffs()) c[std::to_string(e)] = rat_str(x);
  return Json{{"low", s.low()}, {"prec", s.prec()}, {"coeffs", c}};
}

QSeries qseries_from_json(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Validation, "json: series must be an object");
  QSeries s(get_long(j, "low"), get_long(j, "prec"));
  if (!j.contains("coeffs") || !j["coeffs"].is_object()) fail(ErrorKind::Validation, "json: missing coeffs");
  for (auto& [k, v] : j["coeffs"].items()) {
    if (!v.is_string()) fail(ErrorKind::Validation, "json: coefficients are strings");
    size_t used = 0;
    long e = 0;
    try {
      e = std::stol(k, &used);
    } catch (...) {
      used = 0;
    }
    if (used != k.size() || k.empty()) fail(ErrorKind::Validation, "json: bad exponent '" + k + "'");
    if (e < s.low() || e >= s.prec()) fail(ErrorKind::Validation, "json: exponent outside window");
    s.set(e, parse_rat(v.get<std::string>()));
  }
  return s;
}

Json to_json(const PlusForm& f) {
  return Json{{"p", f.p},           {"m", f.pole_order}, {"weight", f.weight},
              {"prec", f.prec()},   {"plus", f.plus_flag}, {"series", to_json(f.series)}};
}

PlusForm plusform_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("series")) fail(ErrorKind::Validation, "json: plus form must have a series");
  PlusForm f;
  f.p = get_long(j, "p");
  f.weight = get_long(j, "weight");
  f.pole_order = get_long(j, "m");
  f.series = qseries_from_json(j["series"]);
  f.plus_flag = j.value("plus", true);
  if (f.prec() != get_long(j, "prec")) fail(ErrorKind::Validation, "json: prec does not match the series");
  check_plus_condition(f);
  return f;
}

Json to_json(const QuadElem& e) { return Json{{"x", rat_json(e.x)}, {"y", rat_json(e.y)}}; }

Json to_json(const HilbertQExpansion& h) {
  Json cs = Json::array();
  for (auto& [k, c] : h.coeffs) cs.push_back(Json{{"u", k.u}, {"v", k.v}, {"c", rat_str(c)}});
  return Json{{"D", h.D},
              {"weight", h.weight},
              {"trace_prec", h.trace_prec},
              {"const", rat_str(h.const_term)},
              {"parity", parity_name(h.parity)},
              {"coeffs", cs}};
}

Json divisor_json(const std::vector<std::pair<long, long>>& divisor) {
  Json z = Json::array();
  auto sorted = divisor;
  std::sort(sorted.begin(), sorted.end());
  for (auto& [m, mult] : sorted) z.push_back(Json{{"m", m}, {"mult", mult}});
  return Json{{"Z", z}};
}

Json to_json(const BorcherdsProduct& P) {
  Json j{{"D", P.D},
         {"weight", rat_json(P.weight)},
         {"divisor", divisor_json(P.divisor)},
         {"weyl_vector", to_json(P.rho)},
         {"chamber", Json{{"w1", rat_str(P.chamber.w1)}, {"w2", rat_str(P.chamber.w2)}}},
         {"height", rat_str(P.C)},
         {"holomorphic", P.holomorphic}};
  bool expanded = false;
  if (P.holomorphic && in_dual(P.rho)) {
    try {
      j["expansion"] = to_json(P.to_hilbert());
      expanded = true;
    } catch (const Error&) {
    }
  }
  if (!expanded) {
    // Laurent exponents relative to the Weyl vector.
    Json ts = Json::array();
    for (auto& [k, c] : P.terms) ts.push_back(Json{{"u", k.u}, {"v", k.v}, {"c", c.get_str()}});
    j["trace_prec"] = P.trace_prec;
    j["terms"] = ts;
  }
  return j;
}

Json to_json(const CMValue& v) {
  Json lt = Json::object();
  for (auto& [l, e] : v.log_terms) lt[std::to_string(l)] = rat_str(e);
  const char* sg = v.value.sign > 0 ? "+" : v.value.sign < 0 ? "-" : "unknown";
  return Json{{"log_terms", lt}, {"value", v.value.signed_str()}, {"sign", sg}};
}

std::map<long, Rat> parse_coeff_list(const std::string& s) {
  std::map<long, Rat> out;
  std::stringstream ss(s);
  std::string item;
  if (s.empty()) fail(ErrorKind::Validation, "empty coefficient list");
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) fail(ErrorKind::Validation, "coefficient '" + item + "' is not m:c");
    std::string ms = item.substr(0, colon), cs = item.substr(colon + 1);
    size_t used = 0;
    long m = 0;
    try {
      m = std::stol(ms, &used);
    } catch (...) {
      used = 0;
    }
    if (ms.empty() || used != ms.size() || m <= 0)
      fail(ErrorKind::Validation, "bad index '" + ms + "' in coefficient list");
    if (out.count(m)) fail(ErrorKind::Validation, "index " + ms + " repeated");
    out[m] = parse_rat(cs);
  }
  if (s.back() == ',') fail(ErrorKind::Validation, "trailing comma in coefficient list");
  return out;
}

}  // namespace hmf
