#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace lapbel {

// Reference solutions (fine-mesh PDAS solves, fine-mesh Green solves) are
// expensive; they are cached on disk keyed by a canonical description string
// plus the mesh level.  Format versioned but not stable across versions.
//
// File layout (text, whitespace separated):
//   lapbel-cache 1
//   key <description, rest of line>
//   level <L>
//   vectors <count>
//   vector <name> <n>
//   <n coefficients, one per line, %.17g>
//   ... repeated per vector
struct CacheEntry {
  std::string key;
  int level = 0;
  std::vector<std::pair<std::string, Eigen::VectorXd>> vectors;

  const Eigen::VectorXd* find(const std::string& name) const;
};

std::uint64_t fnv1a64(std::string_view s);

// LAPBEL_CACHE_DIR overrides; otherwise <output_dir>/cache.
std::filesystem::path cache_root(const std::filesystem::path& output_dir);

std::filesystem::path cache_path(const std::filesystem::path& root, const std::string& key,
                                 int level);

// nullopt when the file is absent.  A present file whose header or key does
// not match throws incompatible_reference (hash collision or stale format).
std::optional<CacheEntry> cache_load(const std::filesystem::path& root, const std::string& key,
                                     int level);

// Write-then-rename so a crashed run never leaves a torn entry behind.
void cache_store(const std::filesystem::path& root, const CacheEntry& entry);

} // namespace lapbel
