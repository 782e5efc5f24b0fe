#include "cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace lapbel {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

const Eigen::VectorXd* CacheEntry::find(const std::string& name) const {
  for (const auto& [n, v] : vectors) {
    if (n == name) return &v;
  }
  return nullptr;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : s) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::filesystem::path cache_root(const std::filesystem::path& output_dir) {
  if (const char* env = std::getenv("LAPBEL_CACHE_DIR"); env && *env) {
    return std::filesystem::path(env);
  }
  return output_dir / "cache";
}

std::filesystem::path cache_path(const std::filesystem::path& root, const std::string& key,
                                 int level) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%016llx-L%d.ref", (unsigned long long)fnv1a64(key), level);
  return root / buf;
}

std::optional<CacheEntry> cache_load(const std::filesystem::path& root, const std::string& key,
                                     int level) {
  const std::filesystem::path path = cache_path(root, key, level);
  std::ifstream in(path);
  if (!in) return std::nullopt;

  auto bad = [&](const std::string& what) {
    fail(errc::incompatible_reference, "cache entry " + path.string() + ": " + what);
  };

  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "lapbel-cache" || version != 1) bad("unrecognized header");

  std::string tag;
  in >> tag;
  if (tag != "key") bad("missing key");
  in.ignore(1);
  std::string stored_key;
  std::getline(in, stored_key);
  if (stored_key != key) bad("key mismatch (hash collision or stale entry)");

  CacheEntry entry;
  entry.key = stored_key;
  int count = 0;
  in >> tag >> entry.level;
  if (tag != "level" || entry.level != level) bad("level mismatch");
  in >> tag >> count;
  if (tag != "vectors" || count < 0 || count > 64) bad("bad vector table");

  for (int k = 0; k < count; ++k) {
    std::string name;
    long n = -1;
    in >> tag >> name >> n;
    if (tag != "vector" || n < 0) bad("bad vector header");
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) in >> v[i];
    if (!in) bad("truncated vector " + name);
    entry.vectors.emplace_back(name, std::move(v));
  }
  return entry;
}

void cache_store(const std::filesystem::path& root, const CacheEntry& entry) {
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  const std::filesystem::path path = cache_path(root, entry.key, entry.level);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    require(bool(out), errc::io_error, "cannot write " + tmp.string());
    out << "lapbel-cache 1\n";
    out << "key " << entry.key << "\n";
    out << "level " << entry.level << "\n";
    out << "vectors " << entry.vectors.size() << "\n";
    for (const auto& [name, v] : entry.vectors) {
      out << "vector " << name << " " << v.size() << "\n";
      for (long i = 0; i < v.size(); ++i) out << fmt17(v[i]) << "\n";
    }
    require(bool(out), errc::io_error, "write failure on " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  require(!ec, errc::io_error, "cannot finalize " + path.string());
}

} // namespace lapbel
