#pragma once

// frontier-sim subcommands. Each cmd_* function is rerun-safe: identical
// inputs give byte-identical outputs. Exit codes: 0 success, 1 validation
// error, 2 runtime error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fsim/corpus.hpp"
#include "fsim/policy.hpp"
#include "fsim/simulator.hpp"

namespace fsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Header of the comparison/metric CSV written by `compare` and `eval`.
inline constexpr const char* kMetricCsvHeader =
    "policy,baseline,query_set,metric,t,value,p_value,significant_vs_baseline";
/// Header of the long-format CSV written by `report`.
inline constexpr const char* kReportCsvHeader =
    "series,query_set,metric,policy,baseline,t,value,baseline_value,relative_gain,p_value,significant_vs_baseline";
inline constexpr const char* kSpeedupCsvHeader = "policy,baseline,query_set,mean_speedup,n_max,undefined_points";

struct RunOptions {
  std::string graph;
  std::string seeds;
  std::string quality;
  std::string qrels;
  double quality_default = 0.0;
  std::vector<PolicyKind> policies;
  std::size_t checkpoint_interval = 0;
  std::size_t budget = 0;
  std::uint64_t rng_seed = 0;
  /// Single-policy output file.
  std::string out;
  /// One `trace-<policy>.tsv` per policy.
  std::string out_dir;
  unsigned jobs = 1;
};

/// A named query set: qrels plus (optionally) query text for nDCG@10.
struct QuerySetPaths {
  std::string name;
  std::string qrels;
  std::string queries;
};

struct EvalOptions {
  std::string graph;
  std::vector<std::string> traces;
  std::vector<QuerySetPaths> query_sets;
  std::string docs;
  std::string baseline = "bfs";
  double alpha = 0.01;
  bool normalize_max_ndcg = false;
  std::string out;
  std::string speedups_out;
  std::string run_dir;
};

struct ReportOptions {
  std::string in;
  std::string out;
};

struct GenSynthOptions {
  std::string config;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> rng_seed;
};

/// Writes trace files; returns their paths in policy order.
std::vector<std::string> cmd_run(const RunOptions& options, std::ostream& log);

/// Per-checkpoint HR, maxNDCG and (with documents and query text) nDCG@10 for
/// every trace, with significance against the baseline trace, plus per-pair
/// mean speedups. Needs at least two traces recorded on the same corpus.
void cmd_compare(const EvalOptions& options, std::ostream& log);

/// Metrics for one or more traces without significance testing.
void cmd_eval(const EvalOptions& options, std::ostream& log);

void cmd_report(const ReportOptions& options, std::ostream& log);

void cmd_gen_synth(const GenSynthOptions& options, std::ostream& log);

/// Parses argv and dispatches; never throws.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fsim::cli
