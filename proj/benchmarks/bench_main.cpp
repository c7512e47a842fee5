#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "fsim/frontier.hpp"
#include "fsim/random.hpp"
#include "fsim/retrieval.hpp"
#include "fsim/simulator.hpp"
#include "fsim/synthgen.hpp"

using namespace fsim;

namespace {

const SynthCorpus& corpus_of(std::size_t pages) {
  static std::map<std::size_t, SynthCorpus> cache;
  auto it = cache.find(pages);
  if (it == cache.end()) {
    SynthConfig c;
    c.num_pages = pages;
    c.assortativity = 0.8;
    it = cache.emplace(pages, generate(c)).first;
  }
  return it->second;
}

void BM_FrontierPushPop(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(1);
  std::vector<double> prio(n);
  for (auto& p : prio) p = rng::uniform(gen);
  for (auto _ : state) {
    Frontier f(n);
    for (std::size_t i = 0; i < n; ++i) f.push(page_at(i), prio[i]);
    while (!f.empty()) benchmark::DoNotOptimize(f.pop());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_FrontierPushPop)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_FrontierDecrease(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(2);
  Frontier f(n);
  for (std::size_t i = 0; i < n; ++i) f.push(page_at(i), 1.0 + rng::uniform(gen));
  for (auto _ : state) {
    const auto p = page_at(rng::below(gen, n));
    f.update_priority(p, f.priority(p) * 0.999);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_FrontierDecrease)->Arg(1 << 16)->Arg(1 << 20);

void BM_RunCrawl(benchmark::State& state) {
  const auto& c = corpus_of(100'000);
  SimConfig cfg;
  cfg.policy = static_cast<PolicyKind>(state.range(0));
  cfg.budget = 50'000;
  cfg.checkpoint_interval = 5'000;
  for (auto _ : state) benchmark::DoNotOptimize(run_crawl(c.graph, c.seeds, c.quality, cfg));
  state.SetLabel(std::string(to_string(cfg.policy)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * cfg.budget));
}
BENCHMARK(BM_RunCrawl)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Bm25Search(benchmark::State& state) {
  const auto& c = corpus_of(20'000);
  const auto docs = c.document_store();
  std::vector<PageId> all;
  for (std::size_t i = 0; i < c.graph.num_pages(); ++i) all.push_back(page_at(i));
  const auto index = InvertedIndex::build(docs, all);
  const auto& queries = c.natural.queries.queries;
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& q = queries[i++ % queries.size()];
    benchmark::DoNotOptimize(bm25_search(index, q.id, q.text, 10));
  }
}
BENCHMARK(BM_Bm25Search);

}  // namespace

BENCHMARK_MAIN();
