#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace fsim {

/// Flat `key = value` document. `#` starts a comment line, values may be
/// wrapped in double quotes, and section headers are rejected. Typed getters
/// throw ValidationError on malformed values; keys that were never read can be
/// listed to catch typos.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<config>");
  static KeyValueConfig load(const std::string& path);

  void set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }
  bool contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

  std::optional<std::string> get_string(std::string_view key) const;
  std::optional<double> get_double(std::string_view key) const;
  std::optional<std::uint64_t> get_uint(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  /// Keys present but never queried through a getter.
  std::set<std::string> unused_keys() const;

  const std::map<std::string, std::string, std::less<>>& entries() const noexcept { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
  mutable std::set<std::string, std::less<>> used_;
};

}  // namespace fsim
