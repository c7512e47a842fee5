#pragma once

// Synthetic quality-assortative web corpora for desk-scale experiments.
//
// Pages belong to a high- or a low-quality population. Each out-link is, with
// probability `assortativity`, drawn from a small window around the source in
// quality-rank order (a quality-similar page) and otherwise uniformly at
// random, so the Pearson correlation of planted quality across edges tracks
// `assortativity`. Two query sets are planted: a "natural" set whose relevant
// pages all come from the high population and a "keyword" set whose relevant
// pages are only weakly tied to quality.

#include <cstdint>
#include <string>
#include <vector>

#include "fsim/corpus.hpp"
#include "fsim/kv_config.hpp"
#include "fsim/quality.hpp"

namespace fsim {

enum class DegreeDistribution { Fixed, Poisson, PowerLaw };

struct SynthConfig {
  std::size_t num_pages = 10'000;
  double avg_out_degree = 10.0;
  DegreeDistribution degree_distribution = DegreeDistribution::Poisson;
  /// Exponent of the power-law out-degree option.
  double power_law_exponent = 2.5;
  double assortativity = 0.8;

  // Two-population quality mixture.
  double high_fraction = 0.3;
  double high_mean = 0.8;
  double low_mean = 0.2;
  double quality_jitter = 0.05;
  /// Gaussian noise between planted quality and the emitted quality scores.
  double estimator_noise = 0.05;

  /// Relevant pages per query set, as a fraction of the high population.
  double relevant_fraction = 0.1;
  /// Share of keyword-set relevant pages drawn from the high population.
  double keyword_high_share = 0.4;
  std::size_t queries_per_set = 100;
  std::size_t num_seeds = 100;

  bool emit_documents = true;
  std::size_t doc_length = 24;
  std::size_t vocabulary_size = 2'000;
  /// Probability that a non-relevant page also mentions a query's signature
  /// term, so that BM25 has distractors to rank below relevant pages.
  double decoy_rate = 0.02;

  std::uint64_t rng_seed = 1;

  /// Throws ValidationError for out-of-range fields or infeasible
  /// combinations (e.g. more relevant pages than the population holds).
  void validate() const;
};

/// Reads the fields above from a flat key-value config (same key names);
/// missing keys keep their defaults, unknown keys are rejected.
SynthConfig synth_config_from(const KeyValueConfig& kv);
std::string to_string(DegreeDistribution d);

struct SynthQuerySet {
  std::string name;
  QuerySet queries;
  Qrels qrels;
};

struct SynthCorpus {
  SynthConfig config;
  WebGraph graph;
  std::vector<double> planted_quality;
  std::vector<bool> high_population;
  QualityTable quality;
  SeedSet seeds;
  SynthQuerySet natural;
  SynthQuerySet keyword;
  /// Text per page; empty unless `emit_documents`.
  std::vector<std::string> documents;

  DocumentStore document_store() const;
};

SynthCorpus generate(const SynthConfig& config);

/// Writes edges.tsv, seeds.txt, quality.tsv, planted_quality.tsv,
/// queries-natural.tsv, qrels-natural.txt, queries-keyword.tsv,
/// qrels-keyword.txt, docs.tsv (when documents exist) and synth.conf.
void write_synth_corpus(const SynthCorpus& corpus, const std::string& dir);

/// Pearson correlation of `quality` between source and target over all edges.
double edge_quality_assortativity(const WebGraph& graph, const std::vector<double>& quality);

/// Fraction of pages reachable from the seeds.
double reachable_fraction(const WebGraph& graph, const SeedSet& seeds);

}  // namespace fsim
