#pragma once

// Persistent memo of exact bracket values, keyed by canonical key strings.
// File format: {"schema":1,"entries":{"<key>":"<num>/<den>", ...}}

#include "rspin/core.hpp"
#include "rspin/rational.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>

#include <fcntl.h>
#include <unistd.h>

namespace rspin {

class CacheStore {
 public:
  static constexpr int schema_version = 1;

  CacheStore() = default;
  CacheStore(const CacheStore& o) : entries_(o.snapshot()), dirty_(o.dirty()) {}
  CacheStore& operator=(const CacheStore& o) {
    if (this != &o) {
      auto copy = o.snapshot();
      std::unique_lock lock(mutex_);
      entries_ = std::move(copy);
      dirty_ = o.dirty();
    }
    return *this;
  }

  std::optional<Rational> get(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const Rational& value) {
    if (!is_canonical_key_string(key)) throw ContractError("non-canonical cache key '" + key + "'");
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.try_emplace(key, value);
    if (!inserted) {
      if (it->second == value) return;
      it->second = value;
    }
    dirty_ = true;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  bool dirty() const {
    std::shared_lock lock(mutex_);
    return dirty_;
  }

  std::map<std::string, Rational> snapshot() const {
    std::shared_lock lock(mutex_);
    return entries_;
  }

  friend bool operator==(const CacheStore& a, const CacheStore& b) { return a.snapshot() == b.snapshot(); }

  std::string to_json() const {
    nlohmann::ordered_json doc;
    doc["schema"] = schema_version;
    auto& entries = doc["entries"] = nlohmann::ordered_json::object();
    for (auto& [k, v] : snapshot()) entries[k] = v.str();
    return doc.dump(1);
  }

  static CacheStore from_json(const std::string& text, const std::string& origin = "<memory>") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("schema") || !doc["schema"].is_number_integer())
      throw ParseError(origin + ": missing integer 'schema'");
    if (doc["schema"].get<int>() != schema_version)
      throw ParseError(origin + ": unsupported schema version " + doc["schema"].dump());
    if (!doc.contains("entries") || !doc["entries"].is_object())
      throw ParseError(origin + ": missing 'entries' object");

    CacheStore store;
    std::size_t index = 0;
    for (auto& [key, value] : doc["entries"].items()) {
      auto where = origin + ": entry " + std::to_string(index++) + " '" + key + "'";
      if (!value.is_string()) throw ParseError(where + ": value is not a string");
      if (!is_canonical_key_string(key)) throw ParseError(where + ": key is not canonical");
      try {
        store.entries_.emplace(key, Rational::parse(value.get<std::string>()));
      } catch (const std::exception& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
    return store;
  }

  static CacheStore load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open cache file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str(), path.string());
  }

  // Loads the file if it exists, otherwise returns an empty store.
  static CacheStore load_or_empty(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return {};
    return load(path);
  }

  // Writes to a sibling temp file, fsyncs, then renames over the target.
  void save(const std::filesystem::path& path) {
    std::unique_lock lock(save_mutex_);
    const std::string text = to_json();
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::string tmpl = path.string() + ".tmp.XXXXXX";
    int fd = ::mkstemp(tmpl.data());
    if (fd < 0) throw Error("cannot create temp file next to " + path.string());
    const std::string tmp = tmpl;
    std::size_t off = 0;
    while (off < text.size()) {
      auto n = ::write(fd, text.data() + off, text.size() - off);
      if (n < 0) {
        ::close(fd);
        std::filesystem::remove(tmp);
        throw Error("write failed for " + tmp);
      }
      off += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
      std::filesystem::remove(tmp);
      throw Error("flush failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
      std::filesystem::remove(tmp);
      throw Error("rename failed for " + path.string());
    }
    std::unique_lock state(mutex_);
    dirty_ = false;
  }

 private:
  mutable std::shared_mutex mutex_;
  std::mutex save_mutex_;
  std::map<std::string, Rational> entries_;
  bool dirty_ = false;
};

// $RSPIN_CACHE, else $XDG_CACHE_HOME/rspin/cache.json, else ~/.cache/rspin/cache.json.
inline std::filesystem::path default_cache_path() {
  if (const char* env = std::getenv("RSPIN_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return std::filesystem::path(xdg) / "rspin" / "cache.json";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "rspin" / "cache.json";
  return "rspin_cache.json";
}

}  // namespace rspin
