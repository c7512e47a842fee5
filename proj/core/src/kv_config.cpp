#include "fsim/kv_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "fsim/types.hpp"

namespace fsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') throw LoadError(source, number, "sections are not supported in flat config files");
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw LoadError(source, number, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw LoadError(source, number, "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
    }
    if (cfg.contains(key)) throw LoadError(source, number, "duplicate key '" + std::string(key) + "'");
    cfg.set(std::string(key), std::string(value));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path, 0, "cannot open file");
  return parse(in, path);
}

std::optional<std::string> KeyValueConfig::get_string(std::string_view key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_.emplace(key);
  return it->second;
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size() || !std::isfinite(v)) {
    throw ValidationError("config key '" + std::string(key) + "': '" + *s + "' is not a finite number");
  }
  return v;
}

std::optional<std::uint64_t> KeyValueConfig::get_uint(std::string_view key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size()) {
    throw ValidationError("config key '" + std::string(key) + "': '" + *s + "' is not a non-negative integer");
  }
  return v;
}

std::optional<bool> KeyValueConfig::get_bool(std::string_view key) const {
  auto s = get_string(key);
  if (!s) return std::nullopt;
  std::transform(s->begin(), s->end(), s->begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (*s == "true" || *s == "1" || *s == "yes" || *s == "on") return true;
  if (*s == "false" || *s == "0" || *s == "no" || *s == "off") return false;
  throw ValidationError("config key '" + std::string(key) + "': '" + *s + "' is not a boolean");
}

std::string KeyValueConfig::get_string(std::string_view key, std::string fallback) const {
  return get_string(key).value_or(std::move(fallback));
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  return get_double(key).value_or(fallback);
}

std::uint64_t KeyValueConfig::get_uint(std::string_view key, std::uint64_t fallback) const {
  return get_uint(key).value_or(fallback);
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const { return get_bool(key).value_or(fallback); }

std::set<std::string> KeyValueConfig::unused_keys() const {
  std::set<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (!used_.contains(k)) out.insert(k);
  }
  return out;
}

}  // namespace fsim
