#include "cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "hmf/serialize.hpp"

namespace hmf::cli {

namespace fs = std::filesystem;

std::string content_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string key_string(long p, long prec) {
  return "p=" + std::to_string(p) + ";method=" + kBasisMethodVersion + ";prec=" + std::to_string(prec);
}

}  // namespace

fs::path BasisCache::default_dir() {
  if (const char* d = std::getenv("HMF_CACHE_DIR"); d && *d) return d;
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "hmf";
  return fs::path(".hmf-cache");
}

fs::path BasisCache::path_for(long p, long prec) const {
  return dir_ / ("plus-basis-" + content_hash(key_string(p, prec)) + ".json");
}

std::optional<std::vector<PlusForm>> BasisCache::load(long p, long m_max, long prec) const {
  fs::path file = path_for(p, prec);
  std::error_code ec;
  if (!fs::exists(file, ec)) return std::nullopt;
  try {
    std::ifstream in(file);
    Json j = Json::parse(in);
    if (j.at("key").get<std::string>() != key_string(p, prec))
      fail(ErrorKind::Validation, "key mismatch");
    if (j.at("m_max").get<long>() < m_max) return std::nullopt;
    std::vector<PlusForm> out;
    for (auto& e : j.at("forms")) {
      PlusForm f = plusform_from_json(e);
      if (f.p != p || f.prec() != prec) fail(ErrorKind::Validation, "entry for the wrong (p, prec)");
      if (f.pole_order <= m_max) out.push_back(std::move(f));
    }
    return out;
  } catch (const std::exception& e) {
    std::cerr << "warning: ignoring corrupted cache file " << file.string() << " (" << e.what()
              << "); recomputing\n";
    return std::nullopt;
  }
}

void BasisCache::store(long p, long m_max, long prec, const std::vector<PlusForm>& forms) const {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) {
    std::cerr << "warning: cannot create cache directory " << dir_.string() << "\n";
    return;
  }
  Json arr = Json::array();
  for (auto& f : forms) arr.push_back(to_json(f));
  Json j{{"key", key_string(p, prec)}, {"m_max", m_max}, {"forms", arr}};
  fs::path file = path_for(p, prec);
  fs::path tmp = file;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    out << j.dump() << "\n";
    if (!out) {
      std::cerr << "warning: cannot write cache file " << tmp.string() << "\n";
      fs::remove(tmp, ec);
      return;
    }
  }
  fs::rename(tmp, file, ec);
  if (ec) {
    std::cerr << "warning: cannot install cache file " << file.string() << "\n";
    fs::remove(tmp, ec);
  }
}

}  // namespace hmf::cli
