#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hmf/plusspace.hpp"

namespace hmf::cli {

// FNV-1a, stable across platforms and runs.
std::string content_hash(const std::string& s);

/// On-disk plus-basis cache; one file per (p, method version, prec).
class BasisCache {
 public:
  explicit BasisCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  // Directory from HMF_CACHE_DIR, else ~/.cache/hmf.
  static std::filesystem::path default_dir();

  std::filesystem::path path_for(long p, long prec) const;
  /// Cached forms with pole order <= m_max, if the file covers m_max. Unreadable files
  /// produce a warning on stderr and nullopt.
  std::optional<std::vector<PlusForm>> load(long p, long m_max, long prec) const;
  void store(long p, long m_max, long prec, const std::vector<PlusForm>& forms) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace hmf::cli
