#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fsim {

/// Dense page index in [0, num_pages). Scoped enum so it never silently mixes
/// with counts or crawl times.
enum class PageId : std::uint32_t {};

constexpr std::size_t index_of(PageId p) noexcept { return static_cast<std::size_t>(p); }
constexpr PageId page_at(std::size_t i) noexcept { return static_cast<PageId>(static_cast<std::uint32_t>(i)); }

/// Crawl time: the 1-based position of a page in the crawl order.
using CrawlTime = std::size_t;

/// Malformed or inconsistent input file. Carries the 1-based line number when
/// one is known (0 otherwise).
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& path, std::size_t line, const std::string& what)
      : std::runtime_error(format(path, line, what)), path_(path), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& path, std::size_t line, const std::string& what) {
    std::string msg = path;
    if (line > 0) msg += ":" + std::to_string(line);
    return msg + ": " + what;
  }

  std::string path_;
  std::size_t line_;
};

/// Bad arguments or configuration detected before any work is done.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A statistic or metric that is mathematically undefined for its inputs
/// (zero variance, unreachable speedup point, degenerate pooled proportion).
class UndefinedStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace fsim
