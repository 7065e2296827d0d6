#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cache.hpp"
#include "hmf/borcherds.hpp"
#include "hmf/cmvalues.hpp"
#include "hmf/plusspace.hpp"
#include "hmf/quadfield.hpp"
#include "hmf/serialize.hpp"

using namespace hmf;

namespace {

struct Options {
  std::string format = "text";
  bool allow_unvalidated_p = false;

  long disc = 0, k = 0;

  long p = 5, m_max = 1, prec = 20;
  bool use_cache = false;
  std::string cache_dir;

  std::string coeffs;
  std::string height = "10";
  std::string basepoint;

  long q = 0;
  std::string delta;

  long d1 = 0, d2 = 0;
  bool verify_numeric = false;
};

BasisOptions basis_opts(const Options& o) {
  BasisOptions b;
  b.allow_unvalidated_p = o.allow_unvalidated_p;
  return b;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

std::pair<Rat, Rat> parse_pair(const std::string& s, const char* what) {
  auto comma = s.find(',');
  if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
    fail(ErrorKind::Validation, std::string(what) + " must be \"a,b\"");
  return {parse_rat(s.substr(0, comma)), parse_rat(s.substr(comma + 1))};
}

int cmd_zeta(const Options& o) {
  Rat z = siegel_zeta(o.disc, o.k);
  if (o.format == "json")
    emit(Json{{"D", o.disc}, {"k", o.k}, {"value", rat_str(z)}});
  else
    std::cout << rat_str(z) << "\n";
  return 0;
}

int cmd_plus_basis(const Options& o) {
  if (o.m_max < 1) fail(ErrorKind::Validation, "--m-max must be >= 1");
  if (o.prec < 1) fail(ErrorKind::Validation, "--prec must be >= 1");
  std::optional<cli::BasisCache> cache;
  if (o.use_cache) cache.emplace(o.cache_dir.empty() ? cli::BasisCache::default_dir() : std::filesystem::path(o.cache_dir));
  std::optional<std::vector<PlusForm>> forms;
  if (cache) forms = cache->load(o.p, o.m_max, o.prec);
  if (!forms) {
    forms = w0plus_basis(o.p, o.m_max, o.prec, basis_opts(o));
    if (cache) cache->store(o.p, o.m_max, o.prec, *forms);
  }
  Json arr = Json::array();
  for (auto& f : *forms) arr.push_back(to_json(f));
  emit(arr);
  return 0;
}

int cmd_borcherds(const Options& o) {
  auto ctp = parse_coeff_list(o.coeffs);
  Rat C = parse_rat(o.height);
  std::optional<std::pair<Rat, Rat>> bp;
  if (!o.basepoint.empty()) bp = parse_pair(o.basepoint, "--basepoint");
  BorcherdsProduct P = borcherds_lift_height(o.p, ctp, C, bp, basis_opts(o));
  emit(to_json(P));
  return 0;
}

// Totally negative Delta for the CM fields over Q(sqrt 5) with class number one tabulated for q.
std::optional<QuadElem> default_delta(long p, long q) {
  if (p != 5) return std::nullopt;
  switch (q) {
    case 5: return QuadElem(-5, -1, 5);
    case 41: return QuadElem(-13, -1, 5);
    case 61: return QuadElem(-18, -4, 5);
    case 109: return QuadElem(-21, -1, 5);
    case 241: return QuadElem(-33, -5, 5);
    case 281: return QuadElem(-37, -7, 5);
    case 409: return QuadElem(-41, -3, 5);
  }
  return std::nullopt;
}

int cmd_cm_value(const Options& o) {
  auto ctp = parse_coeff_list(o.coeffs);
  QuadElem Delta;
  if (!o.delta.empty()) {
    auto [a, b] = parse_pair(o.delta, "--delta");
    Delta = QuadElem(a, b, o.p);
  } else if (auto d = default_delta(o.p, o.q)) {
    Delta = *d;
  } else {
    fail(ErrorKind::Validation, "no tabulated Delta for this (p, q); pass --delta \"a,b\" for (a + b sqrt p)/2");
  }
  CMFieldData data = cm_field_setup(o.p, o.q, Delta);
  long mmax = ctp.rbegin()->first;
  auto basis = w0plus_basis(o.p, mmax, 2, basis_opts(o));
  PlusForm f = plus_combination(basis, ctp);
  CMValue v = by_cm_value(data, f);
  BoundCheck bc = prime_bound_check(data, f, v);
  if (!bc.ok) fail(ErrorKind::Internal, "CM value violates the prime bounds");
  if (o.format == "json")
    emit(to_json(v));
  else
    std::cout << v.value.signed_str() << "\n";
  return 0;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", x);
  return buf;
}

int cmd_gross_zagier(const Options& o) {
  FactoredValue J2 = gross_zagier_J2(o.d1, o.d2);
  Json j{{"d1", o.d1}, {"d2", o.d2}, {"value", J2.str()}};
  std::string report;
  bool ok = true;
  if (o.verify_numeric) {
    double exact = J2.log_abs(), oracle = gz_oracle_log(o.d1, o.d2);
    double rel = std::fabs(exact - oracle) / std::max(1.0, std::fabs(exact));
    ok = rel < 1e-6;
    j["oracle"] = Json{{"log_exact", fmt_double(exact)},
                       {"log_oracle", fmt_double(oracle)},
                       {"rel_log_diff", fmt_double(rel)},
                       {"ok", ok}};
    report = "oracle log difference " + fmt_double(rel) + (ok ? " (ok)" : " (MISMATCH)");
  }
  if (o.format == "json") {
    emit(j);
  } else {
    std::cout << J2.str() << "\n";
    if (!report.empty()) std::cout << report << "\n";
  }
  if (!ok) fail(ErrorKind::Internal, "exact value disagrees with the j-value oracle");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert modular forms over real quadratic fields: lifts, Borcherds products, CM values"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--allow-unvalidated-p", o.allow_unvalidated_p, "Permit p = 13, 17 (rank-checked only)");

  auto* zeta = app.add_subcommand("zeta", "zeta_F(1-k) for k = 2, 4");
  zeta->add_option("--disc", o.disc, "Fundamental discriminant D > 1")->required();
  zeta->add_option("--k", o.k, "2 or 4")->required();

  auto* pb = app.add_subcommand("plus-basis", "Basis f_m of the weight-0 plus space");
  pb->add_option("--p", o.p, "Prime p = 1 mod 4");
  pb->add_option("--m-max", o.m_max, "Largest pole order");
  pb->add_option("--prec", o.prec, "Coefficients below q^prec");
  pb->add_flag("--cache", o.use_cache, "Use the on-disk basis cache (HMF_CACHE_DIR)");
  pb->add_option("--cache-dir", o.cache_dir, "Cache directory, overrides HMF_CACHE_DIR");

  auto* bo = app.add_subcommand("borcherds", "Borcherds product of a weakly holomorphic plus form");
  bo->add_option("--p", o.p, "Prime p = 1 mod 4");
  bo->add_option("--coeffs", o.coeffs, "Principal part \"m1:c1,m2:c2\" (ctilde(-m))")->required();
  bo->add_option("--height", o.height, "Product truncation height C");
  bo->add_option("--basepoint", o.basepoint, "Chamber basepoint \"w1,w2\" (default 2,3)");

  auto* cm = app.add_subcommand("cm-value", "Factored CM value of a Borcherds product of weight 0");
  cm->add_option("--p", o.p, "Prime p = 1 mod 4");
  cm->add_option("--q", o.q, "Prime q with d_K = p^2 q")->required();
  cm->add_option("--delta", o.delta, "Delta = (a + b sqrt p)/2 as \"a,b\"");
  cm->add_option("--coeffs", o.coeffs, "Principal part \"m1:c1,m2:c2\"")->required();

  auto* gz = app.add_subcommand("gross-zagier", "Factored J(d1, d2)^2");
  gz->add_option("--d1", o.d1, "Negative fundamental discriminant")->required();
  gz->add_option("--d2", o.d2, "Negative fundamental discriminant")->required();
  gz->add_flag("--verify-numeric", o.verify_numeric, "Compare against the numerical j-value product");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*zeta) return cmd_zeta(o);
    if (*pb) return cmd_plus_basis(o);
    if (*bo) return cmd_borcherds(o);
    if (*cm) return cmd_cm_value(o);
    if (*gz) return cmd_gross_zagier(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
