#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "cache.hpp"
#include "hmf/serialize.hpp"

using namespace hmf;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* tag) {
  fs::path d = fs::temp_directory_path() / (std::string("hmf-test-") + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("series JSON layout and round trip") {
  QSeries s(-1, 4);
  s.set(-1, 1);
  s.set(2, make_rat(-3, 7));
  Json j = to_json(s);
  CHECK(j.dump() == R"({"low":-1,"prec":4,"coeffs":{"-1":"1","2":"-3/7"}})");
  CHECK(qseries_from_json(j) == s);
  Json bad = j;
  bad["coeffs"]["9"] = "1";
  CHECK_THROWS_AS(qseries_from_json(bad), Error);
  bad = j;
  bad["coeffs"]["x"] = "1";
  CHECK_THROWS_AS(qseries_from_json(bad), Error);
}

TEST_CASE("plus forms round trip") {
  for (auto& f : w0plus_basis(5, 6, 12)) {
    PlusForm g = plusform_from_json(Json::parse(to_json(f).dump()));
    CHECK(g.series == f.series);
    CHECK(g.pole_order == f.pole_order);
    CHECK(g.p == 5);
  }
}

TEST_CASE("Hilbert expansion, divisor and CM value JSON") {
  HilbertQExpansion h;
  h.D = 5;
  h.weight = 2;
  h.trace_prec = 2;
  h.const_term = 1;
  h.set(DualIndex{1, 1}, 120);
  h.set(DualIndex{-1, 1}, 120);
  h.parity = detect_parity(h);
  Json j = to_json(h);
  CHECK(j["const"] == "1");
  CHECK(j["coeffs"].size() == 2);
  CHECK(j["coeffs"][0]["u"] == -1);
  CHECK(j["coeffs"][0]["c"] == "120");
  CHECK(divisor_json({{6, 1}, {1, -2}}).dump() == R"({"Z":[{"m":1,"mult":-2},{"m":6,"mult":1}]})");
  CMValue v;
  v.log_terms = {{2, 20}, {3, 10}};
  v.value.exponents = v.log_terms;
  v.value.sign = 1;
  CHECK(to_json(v).dump() == R"({"log_terms":{"2":"20","3":"10"},"value":"+ 2^20 * 3^10","sign":"+"})");
  v.value.sign = 0;
  CHECK(to_json(v)["sign"] == "unknown");
  CHECK(to_json(QuadElem(make_rat(1, 2), 3, 5)).dump() == R"({"x":"1/2","y":3})");
}

TEST_CASE("coefficient lists") {
  auto m = parse_coeff_list("6:1,1:-2");
  CHECK(m == std::map<long, Rat>{{1, Rat(-2)}, {6, Rat(1)}});
  CHECK(parse_coeff_list("5:1/2")[5] == make_rat(1, 2));
  for (const char* bad : {"", "1", "1:", ":1", "0:1", "-1:1", "1:1,", "1:1,1:2", "a:1", "1:x"})
    CHECK_THROWS_AS(parse_coeff_list(bad), Error);
}

TEST_CASE("cache hash depends on every key part") {
  CHECK(cli::content_hash("a") == cli::content_hash("a"));
  CHECK(cli::content_hash("a") != cli::content_hash("b"));
  cli::BasisCache c("/nonexistent");
  CHECK(c.path_for(5, 10) != c.path_for(5, 11));
  CHECK(c.path_for(5, 10) != c.path_for(13, 10));
}

TEST_CASE("cache store, load and corruption") {
  fs::path dir = scratch_dir("cache");
  cli::BasisCache c(dir);
  CHECK_FALSE(c.load(5, 4, 10).has_value());
  auto b = w0plus_basis(5, 6, 10);
  c.store(5, 6, 10, b);
  auto got = c.load(5, 4, 10);
  REQUIRE(got.has_value());
  CHECK(got->size() == 2);
  CHECK((*got)[1].series == b[1].series);
  // Request beyond what was stored.
  CHECK_FALSE(c.load(5, 9, 10).has_value());
  // No temp files left behind.
  long n = 0;
  for (auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ".json";
  CHECK(n == std::distance(fs::directory_iterator(dir), fs::directory_iterator{}));
  {
    std::ofstream out(c.path_for(5, 10));
    out << "{ not json";
  }
  CHECK_FALSE(c.load(5, 4, 10).has_value());
  {
    // Valid JSON with a tampered coefficient at a chi = -1 index.
    Json j{{"key", "p=5;method=" + std::string(kBasisMethodVersion) + ";prec=10"}, {"m_max", 6}, {"forms", Json::array()}};
    Json f = to_json(b[0]);
    f["series"]["coeffs"]["2"] = "1";
    j["forms"].push_back(f);
    std::ofstream out(c.path_for(5, 10));
    out << j.dump();
  }
  CHECK_FALSE(c.load(5, 4, 10).has_value());
  fs::remove_all(dir);
}
