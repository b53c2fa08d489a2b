#pragma once

// On-disk cache of polynomials and coproduct tables. One file per entry,
// named by the digest of its key; the file records the key, the digest of the
// payload's canonical serialization and the payload itself.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <system_error>

#include "json.hpp"

namespace bsp {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex_digest(std::string_view s) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
  return buf;
}

/// Canonical key: kind|w|m|N|theory. N is "-" for exact values.
inline std::string cache_key(const std::string& kind, const std::string& w, int m, std::optional<int> trunc,
                             const std::string& theory) {
  return kind + "|" + w + "|" + std::to_string(m) + "|" + (trunc ? std::to_string(*trunc) : "-") + "|" + theory;
}

class Cache {
 public:
  /// BSP_CACHE_DIR, or .bsp-cache/ in the working directory.
  static std::filesystem::path default_dir() {
    if (const char* env = std::getenv("BSP_CACHE_DIR"); env && *env) return env;
    return ".bsp-cache";
  }

  explicit Cache(std::filesystem::path dir = default_dir(), std::ostream* warn = &std::cerr)
      : dir_(std::move(dir)), warn_(warn) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) disable("cannot create " + dir_.string());
  }

  bool enabled() const { return enabled_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_of(const std::string& key) const { return dir_ / hex_digest(key); }

  /// Payload stored under key, or nullopt on a miss. A corrupted or foreign
  /// entry counts as a miss and is removed so the next put repairs it.
  std::optional<nlohmann::json> get(const std::string& key) {
    if (!enabled_) return std::nullopt;
    const auto path = path_of(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      auto j = nlohmann::json::parse(buf.str());
      if (j.at("key").get<std::string>() == key && j.at("digest").get<std::string>() == hex_digest(j.at("payload").dump()))
        return j.at("payload");
    } catch (const nlohmann::json::exception&) {
    }
    std::error_code ec;
    std::filesystem::remove(path, ec);
    return std::nullopt;
  }

  /// Store payload atomically (temp file + rename). Returns false when the
  /// cache is disabled or the write failed.
  bool put(const std::string& key, const nlohmann::json& payload) {
    if (!enabled_) return false;
    const std::string body = serialize(key, payload);
    const auto path = path_of(key);
    {
      std::ifstream in(path, std::ios::binary);
      if (in) {
        std::stringstream buf;
        buf << in.rdbuf();
        if (buf.str() == body) return true;
      }
    }
    std::mt19937_64 rng(std::random_device{}());
    const auto tmp = dir_ / (hex_digest(key) + ".tmp" + std::to_string(rng()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << body;
      if (!out) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        disable("cannot write to " + dir_.string());
        return false;
      }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      std::filesystem::remove(tmp, ec);
      disable("cannot write to " + dir_.string());
      return false;
    }
    return true;
  }

  /// Remove every cache entry; returns the number of files removed.
  int clear() {
    if (!enabled_) return 0;
    int n = 0;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir_, ec))
      if (e.is_regular_file() && std::filesystem::remove(e.path(), ec)) ++n;
    return n;
  }

  int size() const {
    if (!enabled_) return 0;
    int n = 0;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir_, ec))
      if (e.is_regular_file() && e.path().extension().empty()) ++n;
    return n;
  }

  static std::string serialize(const std::string& key, const nlohmann::json& payload) {
    nlohmann::json j;
    j["key"] = key;
    j["digest"] = hex_digest(payload.dump());
    j["payload"] = payload;
    return j.dump();
  }

 private:
  void disable(const std::string& why) {
    if (enabled_ && warn_) *warn_ << "warning: " << why << "; continuing without the cache\n";
    enabled_ = false;
  }

  std::filesystem::path dir_;
  std::ostream* warn_;
  bool enabled_ = true;
};

}  // namespace bsp
