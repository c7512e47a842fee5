#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "fsim/kv_config.hpp"
#include "fsim/metrics.hpp"
#include "fsim/retrieval.hpp"
#include "fsim/stats.hpp"
#include "fsim/synthgen.hpp"

namespace fsim::cli {

namespace fs = std::filesystem;

namespace {

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ValidationError(what + " path is required");
  if (!fs::is_regular_file(path)) throw ValidationError(what + " file '" + path + "' does not exist");
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::vector<PolicyKind> parse_policy_list(std::string_view list) {
  std::vector<PolicyKind> out;
  for (const auto& name : split(list, ',')) {
    if (name.empty()) continue;
    const auto kind = parse_policy(name);
    if (std::find(out.begin(), out.end(), kind) != out.end()) {
      throw ValidationError("policy '" + name + "' listed twice");
    }
    out.push_back(kind);
  }
  if (out.empty()) throw ValidationError("at least one policy is required");
  return out;
}

std::string csv_field_check(const std::string& s, const char* what) {
  if (s.find_first_of(",\n\"") != std::string::npos) throw ValidationError(std::string(what) + " '" + s + "' contains a comma, quote or newline");
  return s;
}

// --- trace header peek -----------------------------------------------------

struct TraceHeader {
  std::string corpus;
  std::string seeds;
  std::string policy;
};

TraceHeader peek_trace_header(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line) || !line.starts_with("#fsim-trace")) {
    throw ValidationError("'" + path + "' is not a trace file");
  }
  TraceHeader h;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const auto key = tok.substr(0, eq);
    const auto value = tok.substr(eq + 1);
    if (key == "corpus") h.corpus = value;
    if (key == "seeds") h.seeds = value;
    if (key == "policy") h.policy = value;
  }
  return h;
}

// --- metric rows -------------------------------------------------------------

struct MetricRow {
  std::string policy;
  std::string baseline;
  std::string query_set;
  std::string metric;
  CrawlTime t;
  double value;
  std::optional<double> p_value;
  std::optional<bool> significant;
};

void write_metric_csv(const std::vector<MetricRow>& rows, std::ostream& out) {
  out << kMetricCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.policy << ',' << r.baseline << ',' << r.query_set << ',' << r.metric << ',' << r.t << ','
        << format_double(r.value) << ',' << (r.p_value ? format_double(*r.p_value) : "") << ','
        << (r.significant ? (*r.significant ? "true" : "false") : "") << '\n';
  }
}

struct LoadedQuerySet {
  std::string name;
  Qrels qrels;
  std::optional<QuerySet> queries;
};

struct LoadedTrace {
  std::string label;
  CrawlTrace trace;
};

std::optional<TestResult> try_t_test(const std::vector<double>& xs, const std::vector<double>& ys) {
  try {
    return paired_t_test(xs, ys);
  } catch (const UndefinedStatistic&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<TestResult> try_z_test(std::size_t x1, std::size_t n1, std::size_t x2, std::size_t n2) {
  try {
    return two_proportion_z_test(x1, n1, x2, n2);
  } catch (const UndefinedStatistic&) {
    return std::nullopt;
  }
}

std::vector<CrawlTime> evaluation_schedule(const std::vector<LoadedTrace>& traces) {
  CrawlTime min_length = traces.front().trace.order.size();
  for (const auto& t : traces) min_length = std::min(min_length, t.trace.order.size());
  std::vector<CrawlTime> schedule;
  for (const auto& t : traces) {
    for (CrawlTime c : t.trace.checkpoints) {
      if (c >= 1 && c <= min_length) schedule.push_back(c);
    }
  }
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());
  return schedule;
}

struct Evaluation {
  std::vector<MetricRow> rows;
  std::vector<std::string> speedup_lines;
};

// Shared by compare (baseline set) and eval (no baseline).
Evaluation evaluate(const std::vector<LoadedTrace>& traces, const std::vector<LoadedQuerySet>& sets,
                    const std::optional<DocumentStore>& docs, std::optional<std::size_t> baseline, double alpha,
                    bool normalize, const WebGraph& graph, const std::string& run_dir, std::ostream& log) {
  Evaluation ev;
  const auto schedule = evaluation_schedule(traces);
  const std::string base_label = baseline ? traces[*baseline].label : "";
  const std::string max_ndcg_name = normalize ? "max_ndcg_norm" : "max_ndcg";

  auto significance = [&](const std::optional<TestResult>& r) -> std::pair<std::optional<double>, std::optional<bool>> {
    if (!baseline) return {std::nullopt, std::nullopt};
    if (!r) return {std::nullopt, false};
    return {r->p_value, r->p_value < alpha};
  };

  for (const auto& set : sets) {
    std::vector<RelevantArrivals> arrivals;
    arrivals.reserve(traces.size());
    for (const auto& t : traces) arrivals.push_back(relevant_arrivals(t.trace.order, set.qrels));

    // Harvest rate, z-test on relevant-crawled proportions.
    for (std::size_t i = 0; i < traces.size(); ++i) {
      for (CrawlTime t : schedule) {
        std::optional<TestResult> test;
        if (baseline) {
          test = try_z_test(relevant_crawled(arrivals[i], t), t, relevant_crawled(arrivals[*baseline], t), t);
        }
        const auto [p, sig] = significance(test);
        ev.rows.push_back({traces[i].label, base_label, set.name, "hr", t, harvest_rate(arrivals[i], t), p, sig});
      }
    }

    // maxNDCG, paired t-test over queries.
    for (std::size_t i = 0; i < traces.size(); ++i) {
      for (CrawlTime t : schedule) {
        const auto values = max_ndcg_per_query(arrivals[i], t, normalize);
        double mean = 0.0;
        for (double v : values) mean += v;
        mean = values.empty() ? 0.0 : mean / static_cast<double>(values.size());
        std::optional<TestResult> test;
        if (baseline) test = try_t_test(values, max_ndcg_per_query(arrivals[*baseline], t, normalize));
        const auto [p, sig] = significance(test);
        ev.rows.push_back({traces[i].label, base_label, set.name, max_ndcg_name, t, mean, p, sig});
      }
    }

    // nDCG@10 of BM25 (identity rerank) over the crawled prefix.
    if (docs && set.queries) {
      const IdentityReranker reranker;
      std::vector<std::vector<CheckpointEvaluation>> evals(traces.size());
      for (std::size_t i = 0; i < traces.size(); ++i) {
        for (CrawlTime t : schedule) {
          evals[i].push_back(evaluate_prefix(traces[i].trace.order, t, *docs, *set.queries, set.qrels, reranker));
        }
      }
      if (!evals.empty() && !evals.front().empty() && evals.front().back().queries_without_text > 0) {
        log << "note: " << evals.front().back().queries_without_text << " judged queries in '" << set.name
            << "' have no text and are not evaluated\n";
      }
      auto per_query = [](const CheckpointEvaluation& e) {
        std::vector<double> v;
        for (const auto& [id, value] : e.per_query) v.push_back(value);
        return v;
      };
      for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t c = 0; c < schedule.size(); ++c) {
          std::optional<TestResult> test;
          if (baseline) test = try_t_test(per_query(evals[i][c]), per_query(evals[*baseline][c]));
          const auto [p, sig] = significance(test);
          ev.rows.push_back({traces[i].label, base_label, set.name, "ndcg@10", schedule[c], evals[i][c].mean_ndcg, p, sig});
          if (!run_dir.empty()) {
            fs::create_directories(run_dir);
            const std::string tag = traces[i].label + "-t" + std::to_string(schedule[c]);
            std::ostringstream run;
            write_run(evals[i][c].rankings, graph, tag, run);
            write_text_file((fs::path(run_dir) / ("run-" + set.name + "-" + tag + ".trec")).string(), run.str());
          }
        }
      }
    }

    if (baseline) {
      for (std::size_t i = 0; i < traces.size(); ++i) {
        std::ostringstream line;
        line << traces[i].label << ',' << base_label << ',' << set.name << ',';
        try {
          const auto s = mean_speedup_detail(arrivals[i], arrivals[*baseline]);
          line << format_double(s.value) << ',' << s.n_max << ',' << s.undefined_points;
        } catch (const UndefinedStatistic&) {
          line << ",0," << std::max(arrivals[i].union_times.size(), arrivals[*baseline].union_times.size());
        }
        ev.speedup_lines.push_back(line.str());
      }
    }
  }
  return ev;
}

struct EvalInputs {
  WebGraph graph;
  std::vector<LoadedTrace> traces;
  std::vector<LoadedQuerySet> sets;
  std::optional<DocumentStore> docs;
};

EvalInputs load_eval_inputs(const EvalOptions& o, std::size_t min_traces, std::ostream& log) {
  require_file(o.graph, "graph");
  if (o.traces.size() < min_traces) {
    throw ValidationError("at least " + std::to_string(min_traces) + " trace(s) are required");
  }
  for (const auto& t : o.traces) require_file(t, "trace");
  if (o.query_sets.empty()) throw ValidationError("at least one --qrels query set is required");
  std::vector<std::string> names;
  for (const auto& s : o.query_sets) {
    csv_field_check(s.name, "query set name");
    require_file(s.qrels, "qrels");
    if (!s.queries.empty()) require_file(s.queries, "queries");
    if (std::find(names.begin(), names.end(), s.name) != names.end()) {
      throw ValidationError("query set '" + s.name + "' given twice");
    }
    names.push_back(s.name);
  }
  if (!o.docs.empty()) require_file(o.docs, "documents");
  if (o.out.empty()) throw ValidationError("--out is required");
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw ValidationError("--alpha must lie in (0, 1)");

  // Mismatched corpora are a validation error, caught before loading anything.
  const auto first = peek_trace_header(o.traces.front());
  for (const auto& path : o.traces) {
    const auto h = peek_trace_header(path);
    if (h.corpus != first.corpus || h.seeds != first.seeds) {
      throw ValidationError("trace '" + path + "' was recorded on a different corpus or seed set than '" +
                            o.traces.front() + "'");
    }
  }

  EvalInputs in;
  in.graph = load_edge_list(o.graph);
  Diagnostics diag;
  for (const auto& path : o.traces) {
    auto trace = read_trace(path, in.graph);
    std::string label(to_string(trace.config.policy));
    for (const auto& existing : in.traces) {
      if (existing.label == label) throw ValidationError("two traces use policy '" + label + "'");
    }
    in.traces.push_back({std::move(label), std::move(trace)});
  }
  for (const auto& s : o.query_sets) {
    LoadedQuerySet set{s.name, load_qrels(s.qrels, in.graph, &diag), std::nullopt};
    if (!s.queries.empty()) set.queries = load_queries(s.queries);
    in.sets.push_back(std::move(set));
  }
  if (!o.docs.empty()) in.docs = load_documents(o.docs, in.graph, &diag);
  for (const auto& w : diag.warnings) log << "warning: " << w << '\n';
  return in;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> cmd_run(const RunOptions& o, std::ostream& log) {
  require_file(o.graph, "graph");
  require_file(o.seeds, "seeds");
  if (o.policies.empty()) throw ValidationError("at least one policy is required");
  const bool needs_quality = std::any_of(o.policies.begin(), o.policies.end(), [](PolicyKind k) { return k != PolicyKind::Bfs; });
  if (needs_quality) require_file(o.quality, "quality");
  if (!o.qrels.empty()) require_file(o.qrels, "qrels");
  SimConfig base{o.policies.front(), o.checkpoint_interval, o.budget, o.rng_seed};
  base.validate();
  if (o.policies.size() > 1 && o.out_dir.empty()) throw ValidationError("--out-dir is required for several policies");
  if (o.out.empty() && o.out_dir.empty()) throw ValidationError("--out or --out-dir is required");
  if (o.jobs < 1) throw ValidationError("--jobs must be at least 1");

  std::vector<std::string> paths;
  for (PolicyKind k : o.policies) {
    if (!o.out_dir.empty()) {
      paths.push_back((fs::path(o.out_dir) / ("trace-" + std::string(to_string(k)) + ".tsv")).string());
    } else {
      paths.push_back(o.out);
    }
  }

  const auto graph = load_edge_list(o.graph);
  const auto seeds = load_seeds(o.seeds, graph);
  Diagnostics diag;
  const auto quality = o.quality.empty() ? QualityTable::filled(graph.num_pages(), o.quality_default)
                                         : load_quality_table(o.quality, graph, o.quality_default, &diag);
  if (!o.qrels.empty()) (void)load_qrels(o.qrels, graph, &diag);
  for (const auto& w : diag.warnings) log << "warning: " << w << '\n';
  if (!o.out_dir.empty()) fs::create_directories(o.out_dir);

  // Each policy is an independent single-threaded crawl over shared immutable
  // inputs; results are joined in policy order.
  std::vector<CrawlStats> stats(o.policies.size());
  std::vector<std::size_t> lengths(o.policies.size());
  for (std::size_t first = 0; first < o.policies.size(); first += o.jobs) {
    std::vector<std::future<void>> running;
    for (std::size_t i = first; i < std::min(o.policies.size(), first + o.jobs); ++i) {
      running.push_back(std::async(std::launch::async, [&, i] {
        SimConfig cfg = base;
        cfg.policy = o.policies[i];
        const auto trace = run_crawl(graph, seeds, quality, cfg);
        write_trace(trace, graph, paths[i]);
        stats[i] = trace.stats;
        lengths[i] = trace.order.size();
      }));
    }
    for (auto& f : running) f.get();
  }
  for (std::size_t i = 0; i < o.policies.size(); ++i) {
    log << to_string(o.policies[i]) << ": crawled " << lengths[i] << " pages, frontier peak "
        << stats[i].frontier_peak << ", priority updates " << stats[i].priority_updates << " -> " << paths[i] << '\n';
  }
  return paths;
}

void cmd_compare(const EvalOptions& o, std::ostream& log) {
  auto in = load_eval_inputs(o, 2, log);
  std::optional<std::size_t> baseline;
  for (std::size_t i = 0; i < in.traces.size(); ++i) {
    if (in.traces[i].label == o.baseline) baseline = i;
  }
  if (!baseline) throw ValidationError("no trace uses the baseline policy '" + o.baseline + "'");
  const auto ev = evaluate(in.traces, in.sets, in.docs, baseline, o.alpha, o.normalize_max_ndcg, in.graph, o.run_dir, log);

  std::ostringstream csv;
  write_metric_csv(ev.rows, csv);
  write_text_file(o.out, csv.str());

  std::string speedups_path = o.speedups_out;
  if (speedups_path.empty()) {
    const fs::path p(o.out);
    speedups_path = (p.parent_path() / (p.stem().string() + "-speedups.csv")).string();
  }
  std::ostringstream sp;
  sp << kSpeedupCsvHeader << '\n';
  for (const auto& line : ev.speedup_lines) sp << line << '\n';
  write_text_file(speedups_path, sp.str());
  log << "wrote " << ev.rows.size() << " metric rows to " << o.out << " and " << ev.speedup_lines.size()
      << " speedup rows to " << speedups_path << '\n';
}

void cmd_eval(const EvalOptions& o, std::ostream& log) {
  auto in = load_eval_inputs(o, 1, log);
  const auto ev = evaluate(in.traces, in.sets, in.docs, std::nullopt, o.alpha, o.normalize_max_ndcg, in.graph, o.run_dir, log);
  std::ostringstream csv;
  write_metric_csv(ev.rows, csv);
  write_text_file(o.out, csv.str());
  log << "wrote " << ev.rows.size() << " metric rows to " << o.out << '\n';
}

void cmd_report(const ReportOptions& o, std::ostream& log) {
  require_file(o.in, "comparison");
  if (o.out.empty()) throw ValidationError("--out is required");
  std::ifstream in(o.in);
  std::string line;
  if (!std::getline(in, line) || line != kMetricCsvHeader) {
    throw ValidationError("schema mismatch: '" + o.in + "' does not start with the header '" +
                          std::string(kMetricCsvHeader) + "'");
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 8) throw ValidationError(o.in + ":" + std::to_string(number) + ": expected 8 columns");
    rows.push_back(std::move(fields));
  }

  // (policy, query_set, metric, t) -> value, to look up baseline rows.
  std::map<std::tuple<std::string, std::string, std::string, std::string>, std::string> values;
  for (const auto& r : rows) values[{r[0], r[2], r[3], r[4]}] = r[5];

  std::ostringstream out;
  out << kReportCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string base_value, gain;
    if (!r[1].empty()) {
      const auto it = values.find({r[1], r[2], r[3], r[4]});
      if (it != values.end()) {
        base_value = it->second;
        const double b = std::stod(base_value);
        if (b != 0.0) gain = format_double(std::stod(r[5]) / b - 1.0);
      }
    }
    out << r[2] << '/' << r[3] << '/' << r[0] << ',' << r[2] << ',' << r[3] << ',' << r[0] << ',' << r[1] << ','
        << r[4] << ',' << r[5] << ',' << base_value << ',' << gain << ',' << r[6] << ',' << r[7] << '\n';
  }
  write_text_file(o.out, out.str());
  log << "wrote " << rows.size() << " observations to " << o.out << '\n';
}

void cmd_gen_synth(const GenSynthOptions& o, std::ostream& log) {
  if (o.out_dir.empty()) throw ValidationError("--out-dir is required");
  KeyValueConfig kv;
  if (!o.config.empty()) {
    require_file(o.config, "config");
    kv = KeyValueConfig::load(o.config);
  }
  for (const auto& ov : o.overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + ov + "'");
    kv.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  if (o.rng_seed) kv.set("rng_seed", std::to_string(*o.rng_seed));
  const auto config = synth_config_from(kv);
  config.validate();

  const auto corpus = generate(config);
  write_synth_corpus(corpus, o.out_dir);
  log << "generated " << corpus.graph.num_pages() << " pages, " << corpus.graph.num_edges() << " edges, "
      << corpus.seeds.seeds.size() << " seeds into " << o.out_dir << '\n'
      << "edge quality assortativity " << format_double(edge_quality_assortativity(corpus.graph, corpus.planted_quality))
      << ", reachable from seeds " << format_double(reachable_fraction(corpus.graph, corpus.seeds)) << '\n';
}

// ---------------------------------------------------------------------------

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"frontier-sim: deterministic crawl simulation and evaluation"};
  app.require_subcommand(1);

  // run
  RunOptions run;
  std::string run_config, run_policies;
  auto* run_cmd = app.add_subcommand("run", "Crawl a graph under one or more policies and write traces");
  run_cmd->add_option("--config", run_config, "Flat key=value experiment file; flags win");
  auto* o_graph = run_cmd->add_option("--graph", run.graph, "Edge list");
  auto* o_seeds = run_cmd->add_option("--seeds", run.seeds, "Seed list");
  auto* o_quality = run_cmd->add_option("--quality", run.quality, "Quality table");
  auto* o_qdef = run_cmd->add_option("--quality-default", run.quality_default, "Score for pages missing from the table");
  auto* o_qrels = run_cmd->add_option("--qrels", run.qrels, "Qrels (validated only)");
  auto* o_policy = run_cmd->add_option("--policy", run_policies, "bfs, qoracle, qfirst, qmin (comma separated)");
  auto* o_t = run_cmd->add_option("--T", run.checkpoint_interval, "Pages between checkpoints");
  auto* o_budget = run_cmd->add_option("--budget", run.budget, "Pages to crawl");
  auto* o_seed = run_cmd->add_option("--seed", run.rng_seed, "Seed recorded in the trace");
  auto* o_out = run_cmd->add_option("--out", run.out, "Trace file (single policy)");
  auto* o_outdir = run_cmd->add_option("--out-dir", run.out_dir, "Directory for trace-<policy>.tsv files");
  auto* o_jobs = run_cmd->add_option("--jobs", run.jobs, "Policies crawled in parallel");

  // compare / eval
  EvalOptions eval;
  std::vector<std::string> qrels_specs, query_specs;
  auto add_eval_options = [&](CLI::App* cmd, bool with_baseline) {
    cmd->add_option("--graph", eval.graph, "Edge list")->required();
    cmd->add_option("--traces,--trace", eval.traces, "Trace files")->required();
    cmd->add_option("--qrels", qrels_specs, "NAME=PATH (repeatable) or PATH")->required();
    cmd->add_option("--queries", query_specs, "NAME=PATH query text, enables nDCG@10 with --docs");
    cmd->add_option("--docs", eval.docs, "Document text");
    cmd->add_flag("--normalize-maxndcg", eval.normalize_max_ndcg, "Divide maxNDCG by the corpus-wide ideal");
    cmd->add_option("--out", eval.out, "Metric CSV")->required();
    cmd->add_option("--run-dir", eval.run_dir, "Write TREC run files per checkpoint here");
    if (with_baseline) {
      cmd->add_option("--baseline", eval.baseline, "Baseline policy")->capture_default_str();
      cmd->add_option("--alpha", eval.alpha, "Significance level")->capture_default_str();
      cmd->add_option("--speedups", eval.speedups_out, "Mean speedup CSV (default <out>-speedups.csv)");
    }
  };
  auto* compare_cmd = app.add_subcommand("compare", "Compare traces against a baseline with significance tests");
  add_eval_options(compare_cmd, true);
  auto* eval_cmd = app.add_subcommand("eval", "Per-checkpoint metrics for traces");
  add_eval_options(eval_cmd, false);

  // report
  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Turn a comparison CSV into plot-ready long format");
  report_cmd->add_option("--in", report.in, "Comparison CSV")->required();
  report_cmd->add_option("--out", report.out, "Output CSV")->required();

  // gen-synth
  GenSynthOptions gen;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-synth", "Generate a synthetic quality-assortative corpus");
  gen_cmd->add_option("--config", gen.config, "Flat key=value generator config");
  gen_cmd->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--set", gen.overrides, "key=value override (repeatable)");
  auto* o_gen_seed = gen_cmd->add_option("--seed", gen_seed, "RNG seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run_cmd->parsed()) {
      KeyValueConfig kv;
      if (!run_config.empty()) {
        require_file(run_config, "config");
        kv = KeyValueConfig::load(run_config);
      }
      // Config values are always read so their types get checked, but a flag on the command line wins.
      auto pick = [](CLI::Option* opt, auto& dst, auto value) {
        if (opt->count() == 0) dst = static_cast<std::remove_reference_t<decltype(dst)>>(value);
      };
      pick(o_graph, run.graph, kv.get_string("graph", run.graph));
      pick(o_seeds, run.seeds, kv.get_string("seeds", run.seeds));
      pick(o_quality, run.quality, kv.get_string("quality", run.quality));
      pick(o_qrels, run.qrels, kv.get_string("qrels", run.qrels));
      pick(o_out, run.out, kv.get_string("out", run.out));
      pick(o_outdir, run.out_dir, kv.get_string("out_dir", run.out_dir));
      const auto single_policy = kv.get_string("policy", run_policies);
      pick(o_policy, run_policies, kv.get_string("policies", single_policy));
      pick(o_qdef, run.quality_default, kv.get_double("quality_default", run.quality_default));
      pick(o_t, run.checkpoint_interval, kv.get_uint("T", run.checkpoint_interval));
      pick(o_budget, run.budget, kv.get_uint("budget", run.budget));
      pick(o_seed, run.rng_seed, kv.get_uint("rng_seed", run.rng_seed));
      pick(o_jobs, run.jobs, kv.get_uint("jobs", run.jobs));
      if (const auto unused = kv.unused_keys(); !unused.empty()) {
        throw ValidationError("unknown config key '" + *unused.begin() + "'");
      }
      run.policies = parse_policy_list(run_policies);
      cmd_run(run, out);
    } else if (compare_cmd->parsed() || eval_cmd->parsed()) {
      std::map<std::string, std::string> queries_by_name;
      for (const auto& spec : query_specs) {
        const auto eq = spec.find('=');
        const std::string name = eq == std::string::npos ? "default" : spec.substr(0, eq);
        queries_by_name[name] = eq == std::string::npos ? spec : spec.substr(eq + 1);
      }
      for (const auto& spec : qrels_specs) {
        const auto eq = spec.find('=');
        QuerySetPaths set;
        set.name = eq == std::string::npos ? "default" : spec.substr(0, eq);
        set.qrels = eq == std::string::npos ? spec : spec.substr(eq + 1);
        if (const auto it = queries_by_name.find(set.name); it != queries_by_name.end()) {
          set.queries = it->second;
          queries_by_name.erase(it);
        }
        eval.query_sets.push_back(std::move(set));
      }
      if (!queries_by_name.empty()) {
        throw ValidationError("--queries for '" + queries_by_name.begin()->first + "' has no matching --qrels");
      }
      if (compare_cmd->parsed()) {
        cmd_compare(eval, out);
      } else {
        cmd_eval(eval, out);
      }
    } else if (report_cmd->parsed()) {
      cmd_report(report, out);
    } else if (gen_cmd->parsed()) {
      if (o_gen_seed->count() > 0) gen.rng_seed = gen_seed;
      cmd_gen_synth(gen, out);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace fsim::cli
