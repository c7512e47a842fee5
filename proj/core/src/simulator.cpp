#include "fsim/simulator.hpp"

#include <algorithm>
#include <cstdio>

#include "fsim/frontier.hpp"

namespace fsim {

namespace {

enum class PageState : std::uint8_t { Unseen, Queued, Crawled };

std::uint64_t fnv_u64(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void SimConfig::validate() const {
  if (budget < 1) throw ValidationError("crawl budget must be at least 1");
  if (checkpoint_interval < 1) throw ValidationError("checkpoint interval T must be at least 1");
  if (checkpoint_interval > budget) throw ValidationError("checkpoint interval T must not exceed the budget");
}

std::uint64_t CrawlTrace::config_digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv_u64(h, corpus_digest);
  h = fnv_u64(h, seeds_digest);
  h = fnv_u64(h, static_cast<std::uint64_t>(config.policy));
  h = fnv_u64(h, config.checkpoint_interval);
  h = fnv_u64(h, config.budget);
  h = fnv_u64(h, config.rng_seed);
  return h;
}

bool CrawlTrace::operator==(const CrawlTrace& other) const {
  return config.policy == other.config.policy && config.checkpoint_interval == other.config.checkpoint_interval &&
         config.budget == other.config.budget && config.rng_seed == other.config.rng_seed &&
         corpus_digest == other.corpus_digest && seeds_digest == other.seeds_digest && order == other.order &&
         checkpoints == other.checkpoints && stats == other.stats;
}

std::uint64_t seeds_digest(const SeedSet& seeds) {
  std::uint64_t h = fnv_u64(0xcbf29ce484222325ULL, seeds.seeds.size());
  for (PageId s : seeds.seeds) h = fnv_u64(h, index_of(s));
  return h;
}

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

CrawlTrace run_crawl(const WebGraph& graph, const SeedSet& seeds, const QualityTable& quality, const SimConfig& config,
                     CrawlObserver* observer) {
  config.validate();
  if (seeds.seeds.empty()) throw ValidationError("seed set is empty");
  if (quality.size() != graph.num_pages()) {
    throw ValidationError("quality table covers " + std::to_string(quality.size()) + " pages, graph has " +
                          std::to_string(graph.num_pages()));
  }

  const std::size_t n = graph.num_pages();
  std::vector<PageState> state(n, PageState::Unseen);
  Frontier frontier(n);
  CrawlTrace trace;
  trace.config = config;
  trace.corpus_digest = graph.digest();
  trace.seeds_digest = seeds_digest(seeds);
  trace.order.reserve(std::min(config.budget, n));

  std::size_t discovered = 0;
  for (PageId s : seeds.seeds) {
    if (index_of(s) >= n) throw ValidationError("seed outside graph");
    if (state[index_of(s)] != PageState::Unseen) throw ValidationError("duplicate seed " + graph.key(s));
    frontier.push(s, kSeedPriority);
    state[index_of(s)] = PageState::Queued;
    ++discovered;
    if (observer) observer->on_enqueue(s, kSeedPriority);
  }
  trace.stats.frontier_peak = frontier.size();

  const PolicyKind policy = config.policy;
  while (!frontier.empty() && trace.order.size() < config.budget) {
    const PageId page = frontier.pop().page;
    state[index_of(page)] = PageState::Crawled;
    trace.order.push_back(page);
    const CrawlTime t = trace.order.size();
    if (observer) observer->on_crawl(page, t, frontier.size(), discovered);
    if (graph.is_dangling(page)) ++trace.stats.dangling_pages_crawled;

    const double page_quality = quality.score(page);
    for (PageId target : graph.outlinks(page)) {
      auto& target_state = state[index_of(target)];
      if (target_state == PageState::Crawled) {
        ++trace.stats.links_to_crawled;
        continue;
      }
      DiscoveryContext ctx{page, page_quality, target, std::nullopt};
      if (policy == PolicyKind::QOracle) ctx.target_quality_oracle = quality.score(target);

      if (target_state == PageState::Queued) {
        ++trace.stats.rediscoveries;
        const double current = frontier.priority(target);
        // Seeds keep their sentinel until crawled.
        if (current == kSeedPriority) continue;
        if (const auto revised = rediscovery_update(policy, current, ctx)) {
          frontier.update_priority(target, *revised);
          ++trace.stats.priority_updates;
          if (observer) observer->on_update(target, current, *revised);
        }
      } else {
        const double priority = initial_priority(policy, ctx);
        frontier.push(target, priority);
        target_state = PageState::Queued;
        ++discovered;
        if (observer) observer->on_enqueue(target, priority);
      }
    }
    trace.stats.frontier_peak = std::max(trace.stats.frontier_peak, frontier.size());
    if (t % config.checkpoint_interval == 0) trace.checkpoints.push_back(t);
  }
  if (trace.checkpoints.empty() || trace.checkpoints.back() != trace.order.size()) {
    trace.checkpoints.push_back(trace.order.size());
  }
  return trace;
}

}  // namespace fsim
