// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Thresholds and tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "fsim/frontier.hpp"
#include "fsim/metrics.hpp"
#include "fsim/random.hpp"
#include "fsim/retrieval.hpp"
#include "fsim/simulator.hpp"
#include "fsim/stats.hpp"
#include "fsim/synthgen.hpp"
#include "oracles.hpp"

using namespace fsim;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

// ---------------------------------------------------------------------------
// Invariants checked over every trace produced by the other criteria.

class InvariantLog {
 public:
  void fail(const std::string& what) {
    if (violations_.size() < 10) violations_.push_back(what);
    ++violation_count_;
  }

  // HR * t integral and non-decreasing, raw maxNDCG non-decreasing. Large
  // traces are sampled at every checkpoint plus a fixed stride.
  void check_arrivals(const RelevantArrivals& a, std::span<const CrawlTime> checkpoints, const std::string& label) {
    ++arrival_sets_;
    std::vector<CrawlTime> times(checkpoints.begin(), checkpoints.end());
    const CrawlTime stride = a.crawl_length <= 5000 ? 1 : 97;
    for (CrawlTime t = 1; t <= a.crawl_length; t += stride) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    double prev_count = 0.0;
    std::vector<double> prev_ndcg(a.per_query.size(), 0.0);
    for (CrawlTime t : times) {
      const double scaled = harvest_rate(a, t) * static_cast<double>(t);
      if (std::abs(scaled - std::round(scaled)) > 1e-6) fail(label + ": HR*t not integral at t=" + std::to_string(t));
      if (scaled + 1e-9 < prev_count) fail(label + ": HR*t decreased at t=" + std::to_string(t));
      prev_count = scaled;
      for (std::size_t q = 0; q < a.per_query.size(); ++q) {
        const double v = max_ndcg(a, q, t);
        if (v + 1e-12 < prev_ndcg[q]) fail(label + ": maxNDCG decreased for " + a.query_ids[q]);
        prev_ndcg[q] = v;
      }
      ++hr_points_;
    }
  }

  void check_reciprocity(const RelevantArrivals& a, const RelevantArrivals& b, const std::string& label) {
    const std::size_t common = std::min(a.union_times.size(), b.union_times.size());
    for (std::size_t n = 1; n <= common; ++n) {
      const auto ab = speedup(a, b, n);
      const auto ba = speedup(b, a, n);
      if (!ab || !ba) {
        fail(label + ": speedup undefined at reachable n=" + std::to_string(n));
        continue;
      }
      if (std::abs(*ab * *ba - 1.0) > 1e-12) fail(label + ": s_AB * s_BA != 1 at n=" + std::to_string(n));
      ++speedup_points_;
    }
  }

  void check_ndcg(double v, const std::string& label) {
    if (!(v >= 0.0 && v <= 1.0 + 1e-12)) fail(label + ": nDCG outside [0,1]: " + fmt(v, 6));
    ++ndcg_values_;
  }

  void note_trace() { ++traces_; }
  void note_update() { ++qmin_updates_; }

  std::size_t traces() const { return traces_; }
  std::size_t violation_count() const { return violation_count_; }
  const std::vector<std::string>& violations() const { return violations_; }
  std::string summary() const {
    return std::to_string(traces_) + " traces, " + std::to_string(qmin_updates_) + " QMin updates, " +
           std::to_string(hr_points_) + " HR/maxNDCG points, " + std::to_string(speedup_points_) +
           " speedup pairs, " + std::to_string(ndcg_values_) + " nDCG values";
  }

 private:
  std::vector<std::string> violations_;
  std::size_t violation_count_ = 0;
  std::size_t traces_ = 0;
  std::size_t arrival_sets_ = 0;
  std::size_t qmin_updates_ = 0;
  std::size_t hr_points_ = 0;
  std::size_t speedup_points_ = 0;
  std::size_t ndcg_values_ = 0;
};

InvariantLog g_invariants;

// Tracks each frontier entry's priority; QMin entries may only go down and
// no other policy may revise an entry.
class PriorityProbe : public CrawlObserver {
 public:
  PriorityProbe(std::size_t num_pages, PolicyKind kind) : current_(num_pages, std::nan("")), kind_(kind) {}
  void on_enqueue(PageId page, double priority) override { current_[index_of(page)] = priority; }
  void on_update(PageId page, double from, double to) override {
    if (kind_ != PolicyKind::QMin) g_invariants.fail(std::string(to_string(kind_)) + " revised a priority");
    if (from != current_[index_of(page)]) g_invariants.fail("update from a stale priority");
    if (!(to < from)) g_invariants.fail("QMin priority did not decrease: " + fmt(from, 6) + " -> " + fmt(to, 6));
    current_[index_of(page)] = to;
    g_invariants.note_update();
  }

 private:
  std::vector<double> current_;
  PolicyKind kind_;
};

CrawlTrace probed_crawl(const WebGraph& g, const SeedSet& seeds, const QualityTable& q, const SimConfig& cfg) {
  PriorityProbe probe(g.num_pages(), cfg.policy);
  auto trace = run_crawl(g, seeds, q, cfg, &probe);
  g_invariants.note_trace();
  return trace;
}

// ---------------------------------------------------------------------------

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = seconds_since(start);
  if (!o.pass) ++g_failures;
  std::printf("%s  criterion %d  %s  (%.2f s)  %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
              o.detail.c_str());
  std::fflush(stdout);
}

// --- 1 ---------------------------------------------------------------------

Outcome bfs_oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 gen(1001);
  std::size_t mismatches = 0, pages = 0;
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = 1 + rng::below(gen, 5000);
    const auto g = oracle::random_graph(gen, n, 0.5 + 5.5 * rng::uniform(gen));
    const auto seeds = oracle::random_seeds(gen, g, 10);
    const std::size_t budget = 1 + rng::below(gen, n + 100);
    const std::size_t interval = 1 + rng::below(gen, budget);
    const auto trace = probed_crawl(g, seeds, QualityTable::filled(n, 0.0), {PolicyKind::Bfs, interval, budget, 0});
    if (trace.order != oracle::queue_bfs(g, seeds, budget)) ++mismatches;
    pages += trace.order.size();
    const auto qrels = oracle::random_qrels(gen, n, 5, 0.1);
    g_invariants.check_arrivals(relevant_arrivals(trace.order, qrels), trace.checkpoints, "c1/bfs");
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 10.0, "50 graphs, " + std::to_string(pages) + " pages crawled, " +
                                              std::to_string(mismatches) + " mismatches, limit 10 s"};
}

// --- 2 ---------------------------------------------------------------------

Outcome brute_force_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 gen(2002);
  std::size_t mismatches = 0, updates = 0;
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng::below(gen, 199);
    const auto g = oracle::random_graph(gen, n, 0.5 + 4.5 * rng::uniform(gen));
    const auto seeds = oracle::random_seeds(gen, g, 5);
    // Alternate continuous scores with a handful of levels (many ties).
    const auto q = oracle::random_quality(gen, n, round % 2 == 0 ? 0 : 1 + static_cast<int>(round % 5));
    const std::size_t budget = 1 + rng::below(gen, n + 10);
    const auto qrels = oracle::random_qrels(gen, n, 4, 0.2);
    std::vector<RelevantArrivals> arrivals;
    for (PolicyKind k : kAllPolicies) {
      const auto trace = probed_crawl(g, seeds, q, {k, 1 + rng::below(gen, budget), budget, 0});
      const auto naive = oracle::naive_crawl(g, seeds, q, k, budget);
      if (trace.order != naive.order || trace.stats.priority_updates != naive.priority_updates) ++mismatches;
      updates += naive.priority_updates;
      arrivals.push_back(relevant_arrivals(trace.order, qrels));
      g_invariants.check_arrivals(arrivals.back(), trace.checkpoints, "c2/" + std::string(to_string(k)));
    }
    for (std::size_t i = 0; i < arrivals.size(); ++i) {
      for (std::size_t j = i + 1; j < arrivals.size(); ++j) g_invariants.check_reciprocity(arrivals[i], arrivals[j], "c2");
    }
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && secs < 30.0, "100 graphs x 4 policies, " + std::to_string(updates) +
                                              " QMin updates replayed, " + std::to_string(mismatches) +
                                              " mismatches, limit 30 s"};
}

// --- 3 ---------------------------------------------------------------------

Outcome frontier_differential() {
  const auto start = Clock::now();
  std::mt19937_64 gen(3003);
  constexpr std::size_t kPages = 5000;
  Frontier f(kPages);
  oracle::SortedListFrontier oracle;
  std::vector<std::size_t> queued;
  std::vector<std::size_t> slot(kPages, SIZE_MAX);
  std::size_t mismatches = 0, pops = 0, updates = 0;
  for (int op = 0; op < 10'000; ++op) {
    const auto kind = rng::below(gen, 10);
    const double priority = op % 3 == 0 ? static_cast<double>(rng::below(gen, 8)) : rng::uniform(gen);
    if (kind < 4 || queued.empty()) {
      const auto p = rng::below(gen, kPages);
      if (slot[p] != SIZE_MAX) continue;
      f.push(page_at(p), priority);
      oracle.push(page_at(p), priority);
      slot[p] = queued.size();
      queued.push_back(p);
    } else if (kind < 7) {
      const auto p = queued[rng::below(gen, queued.size())];
      f.update_priority(page_at(p), priority);
      oracle.update(page_at(p), priority);
      ++updates;
    } else {
      const PageId got = f.pop().page;
      const PageId want = oracle.pop();
      if (got != want) ++mismatches;
      ++pops;
      const auto p = index_of(want);
      // Remove from the queued list by swap-and-pop.
      const auto s = slot[p];
      slot[queued.back()] = s;
      queued[s] = queued.back();
      queued.pop_back();
      slot[p] = SIZE_MAX;
    }
    if (f.size() != oracle.size()) ++mismatches;
  }
  while (oracle.size() > 0) {
    if (f.pop().page != oracle.pop()) ++mismatches;
    ++pops;
  }
  const double secs = seconds_since(start);
  return {mismatches == 0 && f.empty() && secs < 5.0,
          "10000 operations (" + std::to_string(updates) + " updates, " + std::to_string(pops) + " pops), " +
              std::to_string(mismatches) + " mismatches, limit 5 s"};
}

// --- 4 ---------------------------------------------------------------------

Outcome metric_unit_oracle() {
  int failed = 0, checked = 0;
  std::string first_failure;
  auto check = [&](const std::string& what, double got, double want, double tol, bool relative) {
    ++checked;
    const double bound = relative ? tol * std::max(std::abs(want), 1e-300) : tol;
    if (!(std::abs(got - want) <= bound)) {
      ++failed;
      if (first_failure.empty()) first_failure = what + " got " + fmt(got, 12) + " want " + fmt(want, 12);
    }
  };
  constexpr double kRel = 1e-9;
  constexpr double kP = 1e-6;

  auto order = [](std::size_t n) {
    std::vector<PageId> o;
    for (std::size_t i = 0; i < n; ++i) o.push_back(page_at(i));
    return o;
  };
  auto qrels = [](std::vector<std::pair<std::string, std::vector<std::size_t>>> spec) {
    std::vector<std::pair<std::string, std::vector<Judgment>>> per_query;
    for (auto& [id, pages] : spec) {
      std::vector<Judgment> j;
      for (auto p : pages) j.push_back({page_at(p), 1});
      per_query.emplace_back(id, j);
    }
    return Qrels::from_judgments(per_query);
  };
  auto arrivals_at = [](std::vector<CrawlTime> times) {
    RelevantArrivals a;
    a.union_times = std::move(times);
    a.union_total = a.union_times.size();
    a.crawl_length = a.union_times.empty() ? 0 : a.union_times.back();
    return a;
  };

  // HR: 3 union-relevant pages within the first 10.
  const auto hr = relevant_arrivals(order(10), qrels({{"a", {2, 5}}, {"b", {9}}, {"c", {77}}}));
  check("HR", harvest_rate(hr, 10), 0.3, kRel, true);

  // maxNDCG with |R^q_t| = 3 of |R^q| = 4.
  const auto md = relevant_arrivals(order(10), qrels({{"q", {0, 4, 8, 50}}}));
  const double raw = 1.0 + 1.0 / std::log2(3.0) + 1.0 / std::log2(4.0);
  check("maxNDCG raw", max_ndcg(md, "q", 10), raw, kRel, true);
  check("maxNDCG raw literal", max_ndcg(md, "q", 10), 2.130929753571457, kRel, true);
  check("maxNDCG normalized", max_ndcg(md, "q", 10, true), raw / (raw + 1.0 / std::log2(5.0)), kRel, true);
  check("maxNDCG |R|=1", max_ndcg(md, "q", 1), 1.0, kRel, true);

  // Speedups.
  check("speedup 1.6", *speedup(arrivals_at({1, 2, 3, 4, 100}), arrivals_at({1, 2, 3, 4, 160}), 5), 1.6, kRel, true);
  check("speedup 0.5", *speedup(arrivals_at({1, 2, 3, 4, 200}), arrivals_at({1, 2, 3, 4, 100}), 5), 0.5, kRel, true);
  check("mean speedup", mean_speedup(arrivals_at({10, 20}), arrivals_at({20, 20})), 1.5, kRel, true);

  // nDCG@10.
  const auto one = Qrels::from_judgments({{"q", {{page_at(5), 1}}}});
  Ranking r{"q", {{page_at(1), 2.0}, {page_at(5), 1.0}}, 10};
  check("nDCG rank 2", ndcg_at_k(r, one, 10), 1.0 / std::log2(3.0), kRel, true);
  DocumentStore docs(6);
  QuerySet qs;
  std::vector<std::pair<std::string, std::vector<Judgment>>> per_query;
  for (std::size_t i = 0; i < 6; ++i) docs.set_text(page_at(i), "shared words here");
  for (std::size_t q = 0; q < 3; ++q) {
    docs.set_text(page_at(2 * q), "shared words sig" + std::to_string(q));
    qs.queries.push_back({"q" + std::to_string(q), "sig" + std::to_string(q)});
    per_query.push_back({"q" + std::to_string(q), {{page_at(2 * q), 1}}});
  }
  const auto sig_qrels = Qrels::from_judgments(per_query);
  check("nDCG full crawl", evaluate_prefix(order(6), 6, docs, qs, sig_qrels, IdentityReranker{}).mean_ndcg, 1.0, kRel,
        true);

  // t-test and z-test; p-values against frozen reference values.
  const std::vector<double> x{1.1, 1.2, 1.3}, y{1.0, 1.0, 1.0};
  const auto t = paired_t_test(x, y);
  check("t statistic", t.statistic, 0.2 / (0.1 / std::sqrt(3.0)), kRel, true);
  check("t p-value", t.p_value, 0.07417990022744847, kP, false);
  const auto z = two_proportion_z_test(50, 100, 30, 100);
  check("z statistic", z.statistic, 0.2 / std::sqrt(0.4 * 0.6 * (0.01 + 0.01)), kRel, true);
  check("z p-value", z.p_value, 0.003892417122778628, kP, false);
  const std::vector<double> a{0.31, 0.52, 0.11, 0.93, 0.44, 0.27, 0.68}, b{0.25, 0.40, 0.20, 0.70, 0.41, 0.30, 0.50};
  const auto t2 = paired_t_test(a, b);
  check("t statistic (n=7)", t2.statistic, 1.6629752630943486, kRel, true);
  check("t p-value (n=7)", t2.p_value, 0.14737750919646847, kP, false);
  const auto z2 = two_proportion_z_test(7, 40, 19, 55);
  check("z statistic (7/40 vs 19/55)", z2.statistic, -1.8397995597859313, kRel, true);
  check("z p-value (7/40 vs 19/55)", z2.p_value, 0.065797670099805, kP, false);

  return {failed == 0, std::to_string(checked) + " values checked, " + std::to_string(failed) + " off" +
                           (first_failure.empty() ? "" : " (" + first_failure + ")")};
}

// --- 5, 6, 8, 9: synthetic corpus runs -----------------------------------

constexpr std::size_t kSynthPages = 100'000;
constexpr std::size_t kInterval = 5'000;
constexpr std::size_t kBudget = 50'000;
constexpr int kSeeds = 5;
constexpr double kAlpha = 0.01;

struct SeedRun {
  std::uint64_t seed;
  std::map<PolicyKind, CrawlTrace> traces;
  std::map<PolicyKind, RelevantArrivals> natural;
  std::map<PolicyKind, RelevantArrivals> keyword;
};

SynthConfig acceptance_config(std::uint64_t seed) {
  SynthConfig c;
  c.num_pages = kSynthPages;
  c.avg_out_degree = 10.0;
  c.assortativity = 0.8;
  c.rng_seed = seed;
  return c;
}

std::vector<SeedRun> g_runs;
std::string g_seed1_serialized[4];
double g_synth_seconds = 0.0;

void run_synthetic_experiment() {
  const auto start = Clock::now();
  for (int s = 1; s <= kSeeds; ++s) {
    const auto corpus = generate(acceptance_config(static_cast<std::uint64_t>(s)));
    SeedRun run{static_cast<std::uint64_t>(s), {}, {}, {}};
    for (PolicyKind k : kAllPolicies) {
      auto trace = probed_crawl(corpus.graph, corpus.seeds, corpus.quality, {k, kInterval, kBudget, run.seed});
      run.natural[k] = relevant_arrivals(trace.order, corpus.natural.qrels);
      run.keyword[k] = relevant_arrivals(trace.order, corpus.keyword.qrels);
      if (s == 1) {
        std::ostringstream out;
        write_trace(trace, corpus.graph, out);
        g_seed1_serialized[static_cast<int>(k)] = out.str();
      }
      run.traces[k] = std::move(trace);
    }
    g_runs.push_back(std::move(run));
  }
  g_synth_seconds = seconds_since(start);
}

Outcome qualitative_reproduction() {
  run_synthetic_experiment();
  std::vector<CrawlTime> times;
  for (CrawlTime t = kInterval; t <= kBudget / 2; t += kInterval) times.push_back(t);

  bool ok = true;
  std::ostringstream detail;
  double worst_p = 0.0;
  for (CrawlTime t : times) {
    std::map<PolicyKind, double> mean;
    for (const auto& run : g_runs) {
      for (PolicyKind k : kAllPolicies) mean[k] += harvest_rate(run.natural.at(k), t) / kSeeds;
    }
    const bool order_ok = mean[PolicyKind::QOracle] >= mean[PolicyKind::QFirst] &&
                          mean[PolicyKind::QFirst] > mean[PolicyKind::Bfs] &&
                          mean[PolicyKind::QMin] > mean[PolicyKind::Bfs];
    bool significant = true;
    for (const auto& run : g_runs) {
      const auto base = relevant_crawled(run.natural.at(PolicyKind::Bfs), t);
      for (PolicyKind k : {PolicyKind::QFirst, PolicyKind::QMin}) {
        const auto x = relevant_crawled(run.natural.at(k), t);
        const auto z = two_proportion_z_test(x, t, base, t);
        worst_p = std::max(worst_p, z.p_value);
        if (!(z.p_value < kAlpha && z.statistic > 0)) significant = false;
      }
    }
    ok = ok && order_ok && significant;
    if (t == times.front() || t == times.back() || !order_ok || !significant) {
      detail << "t=" << t << " HR bfs " << fmt(mean[PolicyKind::Bfs]) << " qoracle " << fmt(mean[PolicyKind::QOracle])
             << " qfirst " << fmt(mean[PolicyKind::QFirst]) << " qmin " << fmt(mean[PolicyKind::QMin])
             << (order_ok ? "" : " [ORDER]") << (significant ? "" : " [NOT SIGNIFICANT]") << "; ";
    }
  }
  detail << "max z-test p " << worst_p << " (alpha " << kAlpha << "); 5 seeds x 4 policies in "
         << fmt(g_synth_seconds, 1) << " s, limit 300 s";
  ok = ok && g_synth_seconds < 300.0;

  // Invariants over these traces.
  for (const auto& run : g_runs) {
    for (PolicyKind k : kAllPolicies) {
      const auto& cps = run.traces.at(k).checkpoints;
      g_invariants.check_arrivals(run.natural.at(k), cps, "c5/natural");
      g_invariants.check_arrivals(run.keyword.at(k), cps, "c5/keyword");
    }
    for (PolicyKind k : {PolicyKind::QOracle, PolicyKind::QFirst, PolicyKind::QMin}) {
      g_invariants.check_reciprocity(run.natural.at(k), run.natural.at(PolicyKind::Bfs), "c5/natural");
      g_invariants.check_reciprocity(run.keyword.at(k), run.keyword.at(PolicyKind::Bfs), "c5/keyword");
    }
  }
  return {ok, detail.str()};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome efficiency_direction() {
  if (g_runs.empty()) return {false, "synthetic runs unavailable"};
  bool ok = true;
  std::ostringstream detail;
  for (const char* set : {"natural", "keyword"}) {
    const bool natural = std::string(set) == "natural";
    const double threshold = natural ? 1.2 : 0.8;
    detail << set << " (>" << threshold << "):";
    for (PolicyKind k : {PolicyKind::QOracle, PolicyKind::QFirst, PolicyKind::QMin}) {
      std::vector<double> per_seed;
      for (const auto& run : g_runs) {
        const auto& arrivals = natural ? run.natural : run.keyword;
        per_seed.push_back(mean_speedup(arrivals.at(k), arrivals.at(PolicyKind::Bfs)));
      }
      const double m = median(per_seed);
      ok = ok && m > threshold;
      detail << ' ' << to_string(k) << ' ' << fmt(m, 3);
    }
    detail << "; ";
  }
  detail << "median over 5 seeds";
  return {ok, detail.str()};
}

// --- 7 ---------------------------------------------------------------------

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    out[fs::relative(entry.path(), dir).string()] = ss.str();
  }
  return out;
}

int cli_call(std::vector<std::string> args) {
  args.insert(args.begin(), "frontier-sim");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return code;
}

bool cli_pipeline(const fs::path& dir) {
  const auto p = [&](const std::string& rel) { return (dir / rel).string(); };
  if (cli_call({"gen-synth", "--out-dir", p("corpus"), "--set", "num_pages=20000", "--seed", "17"}) != 0) return false;
  if (cli_call({"run", "--graph", p("corpus/edges.tsv"), "--seeds", p("corpus/seeds.txt"), "--quality",
                p("corpus/quality.tsv"), "--policy", "bfs,qoracle,qfirst,qmin", "--T", "2000", "--budget", "10000",
                "--out-dir", p("traces"), "--jobs", "4"}) != 0) {
    return false;
  }
  if (cli_call({"compare", "--graph", p("corpus/edges.tsv"), "--traces", p("traces/trace-bfs.tsv"),
                p("traces/trace-qoracle.tsv"), p("traces/trace-qfirst.tsv"), p("traces/trace-qmin.tsv"), "--qrels",
                "natural=" + p("corpus/qrels-natural.txt"), "--qrels", "keyword=" + p("corpus/qrels-keyword.txt"),
                "--queries", "natural=" + p("corpus/queries-natural.tsv"), "--queries",
                "keyword=" + p("corpus/queries-keyword.tsv"), "--docs", p("corpus/docs.tsv"), "--out",
                p("compare.csv"), "--run-dir", p("runs")}) != 0) {
    return false;
  }
  return cli_call({"report", "--in", p("compare.csv"), "--out", p("report.csv")}) == 0;
}

Outcome determinism() {
  // Library path: regenerate seed 1 and compare serialized traces.
  std::size_t trace_diffs = 0;
  if (g_runs.empty()) return {false, "synthetic runs unavailable"};
  const auto corpus = generate(acceptance_config(1));
  for (PolicyKind k : kAllPolicies) {
    const auto trace = probed_crawl(corpus.graph, corpus.seeds, corpus.quality, {k, kInterval, kBudget, 1});
    std::ostringstream out;
    write_trace(trace, corpus.graph, out);
    if (out.str() != g_seed1_serialized[static_cast<int>(k)]) ++trace_diffs;
  }

  // CLI path: full pipeline twice into separate directories.
  const auto root = fs::temp_directory_path() / "fsim_acceptance_determinism";
  fs::remove_all(root);
  const bool ran = cli_pipeline(root / "a") && cli_pipeline(root / "b");
  std::size_t files = 0, file_diffs = 0;
  if (ran) {
    const auto a = directory_bytes(root / "a");
    const auto b = directory_bytes(root / "b");
    files = a.size();
    if (a.size() != b.size()) ++file_diffs;
    for (const auto& [name, bytes] : a) {
      const auto it = b.find(name);
      if (it == b.end() || it->second != bytes) ++file_diffs;
    }
  }
  fs::remove_all(root);
  return {ran && trace_diffs == 0 && file_diffs == 0 && files > 0,
          "4 acceptance traces re-run: " + std::to_string(trace_diffs) + " differ; CLI pipeline twice: " +
              std::to_string(files) + " files, " + std::to_string(file_diffs) + " differ"};
}

// --- 8 ---------------------------------------------------------------------

Outcome monotone_invariance() {
  std::size_t compared = 0, diffs = 0;
  const auto corpus = generate(acceptance_config(1));
  const auto shifted = corpus.quality.transformed([](double s) { return 2.0 * s + 1.0; });
  for (PolicyKind k : {PolicyKind::QOracle, PolicyKind::QFirst, PolicyKind::QMin}) {
    const auto a = probed_crawl(corpus.graph, corpus.seeds, corpus.quality, {k, kInterval, kBudget, 1});
    const auto b = probed_crawl(corpus.graph, corpus.seeds, shifted, {k, kInterval, kBudget, 1});
    ++compared;
    if (a.order != b.order || a.stats.priority_updates != b.stats.priority_updates) ++diffs;
  }
  std::mt19937_64 gen(8008);
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = 2 + rng::below(gen, 500);
    const auto g = oracle::random_graph(gen, n, 1 + 4 * rng::uniform(gen));
    const auto seeds = oracle::random_seeds(gen, g, 5);
    const auto q = oracle::random_quality(gen, n, round % 2 == 0 ? 0 : 5);
    const auto q2 = q.transformed([](double s) { return 2.0 * s + 1.0; });
    for (PolicyKind k : {PolicyKind::QOracle, PolicyKind::QFirst, PolicyKind::QMin}) {
      ++compared;
      if (run_crawl(g, seeds, q, {k, 1, n, 0}).order != run_crawl(g, seeds, q2, {k, 1, n, 0}).order) ++diffs;
    }
  }
  return {diffs == 0, std::to_string(compared) + " trace pairs (s vs 2s+1), " + std::to_string(diffs) + " differ"};
}

// --- 9 ---------------------------------------------------------------------

Outcome invariant_sweeps() {
  // nDCG@10 range over the acceptance traces of seed 1 at three checkpoints.
  const auto corpus = generate(acceptance_config(1));
  const auto docs = corpus.document_store();
  if (!g_runs.empty()) {
    for (PolicyKind k : kAllPolicies) {
      const auto& trace = g_runs.front().traces.at(k);
      for (CrawlTime t : {kInterval, kBudget / 2, kBudget}) {
        for (const auto* set : {&corpus.natural, &corpus.keyword}) {
          const auto e = evaluate_prefix(trace.order, std::min(t, trace.order.size()), docs, set->queries, set->qrels,
                                         IdentityReranker{});
          for (const auto& [id, v] : e.per_query) g_invariants.check_ndcg(v, "c9/" + set->name);
          g_invariants.check_ndcg(e.mean_ndcg, "c9/" + set->name + "/mean");
        }
      }
    }
  }
  std::string detail = g_invariants.summary() + "; " + std::to_string(g_invariants.violation_count()) + " violations";
  for (const auto& v : g_invariants.violations()) detail += " | " + v;
  return {g_invariants.violation_count() == 0 && g_invariants.traces() > 0 && !g_runs.empty(), detail};
}

}  // namespace

int main() {
  std::printf("frontier-sim acceptance suite\n");
  report(1, "bfs-oracle-equivalence", bfs_oracle_equivalence);
  report(2, "brute-force-policy-equivalence", brute_force_equivalence);
  report(3, "frontier-differential", frontier_differential);
  report(4, "metric-unit-oracle", metric_unit_oracle);
  report(5, "qualitative-reproduction", qualitative_reproduction);
  report(6, "efficiency-direction", efficiency_direction);
  report(7, "determinism", determinism);
  report(8, "monotone-transform-invariance", monotone_invariance);
  report(9, "invariant-sweeps", invariant_sweeps);
  std::printf("%d of 9 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
