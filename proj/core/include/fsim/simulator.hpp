#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fsim/corpus.hpp"
#include "fsim/policy.hpp"
#include "fsim/quality.hpp"
#include "fsim/types.hpp"

namespace fsim {

struct SimConfig {
  PolicyKind policy = PolicyKind::Bfs;
  /// Pages between checkpoints (T).
  std::size_t checkpoint_interval = 1;
  /// Maximum number of pages to crawl.
  std::size_t budget = 1;
  /// Recorded in outputs for synthetic scorers; the crawl loop draws nothing.
  std::uint64_t rng_seed = 0;

  /// Throws ValidationError unless 0 < checkpoint_interval <= budget.
  void validate() const;
};

struct CrawlStats {
  std::size_t frontier_peak = 0;
  /// Out-links to pages that were already queued.
  std::size_t rediscoveries = 0;
  std::size_t priority_updates = 0;
  /// Out-links to pages that were already crawled.
  std::size_t links_to_crawled = 0;
  /// Crawled pages that were materialized from dangling link targets.
  std::size_t dangling_pages_crawled = 0;

  bool operator==(const CrawlStats&) const = default;
};

/// One crawl. `order[i]` was crawled at time t = i + 1; checkpoints are crawl
/// times (every T pages, plus the final length).
struct CrawlTrace {
  SimConfig config;
  std::uint64_t corpus_digest = 0;
  std::uint64_t seeds_digest = 0;
  std::vector<PageId> order;
  std::vector<CrawlTime> checkpoints;
  CrawlStats stats;

  /// Digest of corpus, seeds and config; written in the trace header.
  std::uint64_t config_digest() const;

  bool operator==(const CrawlTrace& other) const;
};

/// Hooks for tests and instrumentation. All default to no-ops.
class CrawlObserver {
 public:
  virtual ~CrawlObserver() = default;
  virtual void on_enqueue(PageId /*page*/, double /*priority*/) {}
  virtual void on_update(PageId /*page*/, double /*old_priority*/, double /*new_priority*/) {}
  /// Called after `page` is appended to the trace and before its out-links
  /// are processed. `discovered` counts crawled plus queued pages.
  virtual void on_crawl(PageId /*page*/, CrawlTime /*t*/, std::size_t /*frontier_size*/, std::size_t /*discovered*/) {}
};

std::uint64_t seeds_digest(const SeedSet& seeds);

/// Sequential crawl simulation: seeds first (sentinel priority, seed order),
/// then repeatedly pop the best page, record it, and enqueue or re-prioritise
/// its out-links per `config.policy`. Stops at the budget or when the
/// frontier runs dry. Deterministic.
///
/// Throws ValidationError for an empty or duplicated seed set, an invalid
/// config, or a quality table that does not cover the graph.
CrawlTrace run_crawl(const WebGraph& graph, const SeedSet& seeds, const QualityTable& quality, const SimConfig& config,
                     CrawlObserver* observer = nullptr);

// Trace files: a `#fsim-trace` header with digests and config, one external
// key per line in crawl order, then `#checkpoints`, `#stats` and `#end` lines.

void write_trace(const CrawlTrace& trace, const WebGraph& graph, std::ostream& out);
void write_trace(const CrawlTrace& trace, const WebGraph& graph, const std::string& path);

/// Throws LoadError (with a byte offset for truncated input) on malformed
/// files, unknown keys, or a trace recorded on a different graph.
CrawlTrace read_trace(std::istream& in, const WebGraph& graph, const std::string& source = "<trace>");
CrawlTrace read_trace(const std::string& path, const WebGraph& graph);

std::string to_hex(std::uint64_t v);

}  // namespace fsim
