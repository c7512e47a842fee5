#include "fsim/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>

#include "fsim/random.hpp"

namespace fsim {

namespace {

// Independent generator streams per phase, so e.g. toggling document output
// leaves the graph untouched.
enum class Phase : std::uint64_t { Population, Quality, Edges, Seeds, Estimator, Natural, Keyword, Documents };

std::mt19937_64 stream(std::uint64_t seed, Phase phase) {
  return std::mt19937_64(rng::splitmix64(seed ^ rng::splitmix64(static_cast<std::uint64_t>(phase) + 1)));
}

std::size_t poisson(std::mt19937_64& gen, double lambda) {
  if (lambda <= 0.0) return 0;
  if (lambda > 50.0) {
    return static_cast<std::size_t>(std::max(0.0, std::round(rng::normal(gen, lambda, std::sqrt(lambda)))));
  }
  const double limit = std::exp(-lambda);
  std::size_t k = 0;
  double prod = rng::uniform(gen);
  while (prod > limit) {
    ++k;
    prod *= rng::uniform(gen);
  }
  return k;
}

std::size_t draw_degree(const SynthConfig& cfg, std::mt19937_64& gen) {
  const double avg = cfg.avg_out_degree;
  std::size_t d = 0;
  switch (cfg.degree_distribution) {
    case DegreeDistribution::Fixed: {
      const double whole = std::floor(avg);
      d = static_cast<std::size_t>(whole) + (rng::bernoulli(gen, avg - whole) ? 1 : 0);
      break;
    }
    case DegreeDistribution::Poisson:
      d = poisson(gen, avg);
      break;
    case DegreeDistribution::PowerLaw: {
      // Continuous Pareto with mean `avg`, rounded.
      const double alpha = cfg.power_law_exponent;
      const double xmin = avg * (alpha - 2.0) / (alpha - 1.0);
      const double x = xmin * std::pow(1.0 - rng::uniform(gen), -1.0 / (alpha - 1.0));
      d = static_cast<std::size_t>(std::min(x + 0.5, 1e12));
      break;
    }
  }
  return std::min(d, cfg.num_pages - 1);
}

// Samples `count` distinct values of `pool` (order is the sampling order).
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> pool, std::size_t count,
                                                    std::mt19937_64& gen) {
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + rng::below(gen, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

std::size_t high_count(const SynthConfig& c) {
  return static_cast<std::size_t>(std::llround(c.high_fraction * static_cast<double>(c.num_pages)));
}

std::size_t relevant_count(const SynthConfig& c) {
  return static_cast<std::size_t>(std::llround(c.relevant_fraction * static_cast<double>(high_count(c))));
}

std::size_t keyword_high_count(const SynthConfig& c) {
  return static_cast<std::size_t>(std::llround(c.keyword_high_share * static_cast<double>(relevant_count(c))));
}

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

SynthQuerySet plant_queries(const std::string& name, const std::string& term_prefix, std::vector<std::size_t> relevant,
                            const SynthCorpus& corpus, std::mt19937_64& gen) {
  const auto& cfg = corpus.config;
  SynthQuerySet set;
  set.name = name;
  std::vector<std::pair<std::string, std::vector<Judgment>>> judgments(cfg.queries_per_set);
  for (std::size_t q = 0; q < cfg.queries_per_set; ++q) {
    judgments[q].first = name + "-" + std::to_string(q);
    std::string text = term_prefix + std::to_string(q);
    for (int w = 0; w < 2; ++w) text += " w" + std::to_string(rng::below(gen, std::max<std::size_t>(1, cfg.vocabulary_size)));
    set.queries.queries.push_back({judgments[q].first, std::move(text)});
  }
  // `relevant` is already in random order; deal it round-robin.
  for (std::size_t i = 0; i < relevant.size(); ++i) {
    const std::size_t page = relevant[i];
    const int grade = corpus.planted_quality[page] >= cfg.high_mean ? 2 : 1;
    judgments[i % cfg.queries_per_set].second.push_back({page_at(page), grade});
  }
  set.qrels = Qrels::from_judgments(std::move(judgments));
  return set;
}

}  // namespace

std::string to_string(DegreeDistribution d) {
  switch (d) {
    case DegreeDistribution::Fixed:
      return "fixed";
    case DegreeDistribution::Poisson:
      return "poisson";
    case DegreeDistribution::PowerLaw:
      return "powerlaw";
  }
  return "unknown";
}

void SynthConfig::validate() const {
  if (num_pages < 2) throw ValidationError("num_pages must be at least 2");
  if (num_pages >= (std::size_t{1} << 32) - 1) throw ValidationError("num_pages exceeds 32-bit page ids");
  if (!(avg_out_degree >= 0.0) || avg_out_degree > static_cast<double>(num_pages - 1)) {
    throw ValidationError("avg_out_degree must lie in [0, num_pages - 1]");
  }
  if (degree_distribution == DegreeDistribution::PowerLaw && !(power_law_exponent > 2.0)) {
    throw ValidationError("power_law_exponent must exceed 2 for a finite mean degree");
  }
  require_unit(assortativity, "assortativity");
  require_unit(high_fraction, "high_fraction");
  require_unit(high_mean, "high_mean");
  require_unit(low_mean, "low_mean");
  require_unit(relevant_fraction, "relevant_fraction");
  require_unit(keyword_high_share, "keyword_high_share");
  require_unit(decoy_rate, "decoy_rate");
  if (!(quality_jitter >= 0.0) || !(estimator_noise >= 0.0)) {
    throw ValidationError("quality_jitter and estimator_noise must be non-negative");
  }
  if (num_seeds < 1 || num_seeds > num_pages) throw ValidationError("num_seeds must lie in [1, num_pages]");
  if (queries_per_set < 1) throw ValidationError("queries_per_set must be at least 1");
  if (emit_documents && vocabulary_size < 1) throw ValidationError("vocabulary_size must be at least 1");

  const std::size_t high = high_count(*this);
  const std::size_t low = num_pages - high;
  const std::size_t relevant = relevant_count(*this);
  if (relevant < queries_per_set) {
    throw ValidationError("infeasible: " + std::to_string(relevant) + " relevant pages per query set cannot cover " +
                          std::to_string(queries_per_set) + " queries (raise relevant_fraction or high_fraction)");
  }
  if (keyword_high_count(*this) > high || relevant - keyword_high_count(*this) > low) {
    throw ValidationError("infeasible: keyword relevant pages exceed a quality population");
  }
}

SynthConfig synth_config_from(const KeyValueConfig& kv) {
  SynthConfig c;
  c.num_pages = kv.get_uint("num_pages", c.num_pages);
  c.avg_out_degree = kv.get_double("avg_out_degree", c.avg_out_degree);
  if (const auto d = kv.get_string("degree_distribution")) {
    if (*d == "fixed") {
      c.degree_distribution = DegreeDistribution::Fixed;
    } else if (*d == "poisson") {
      c.degree_distribution = DegreeDistribution::Poisson;
    } else if (*d == "powerlaw") {
      c.degree_distribution = DegreeDistribution::PowerLaw;
    } else {
      throw ValidationError("degree_distribution must be fixed, poisson or powerlaw");
    }
  }
  c.power_law_exponent = kv.get_double("power_law_exponent", c.power_law_exponent);
  c.assortativity = kv.get_double("assortativity", c.assortativity);
  c.high_fraction = kv.get_double("high_fraction", c.high_fraction);
  c.high_mean = kv.get_double("high_mean", c.high_mean);
  c.low_mean = kv.get_double("low_mean", c.low_mean);
  c.quality_jitter = kv.get_double("quality_jitter", c.quality_jitter);
  c.estimator_noise = kv.get_double("estimator_noise", c.estimator_noise);
  c.relevant_fraction = kv.get_double("relevant_fraction", c.relevant_fraction);
  c.keyword_high_share = kv.get_double("keyword_high_share", c.keyword_high_share);
  c.queries_per_set = kv.get_uint("queries_per_set", c.queries_per_set);
  c.num_seeds = kv.get_uint("num_seeds", c.num_seeds);
  c.emit_documents = kv.get_bool("emit_documents", c.emit_documents);
  c.doc_length = kv.get_uint("doc_length", c.doc_length);
  c.vocabulary_size = kv.get_uint("vocabulary_size", c.vocabulary_size);
  c.decoy_rate = kv.get_double("decoy_rate", c.decoy_rate);
  c.rng_seed = kv.get_uint("rng_seed", c.rng_seed);
  if (const auto unused = kv.unused_keys(); !unused.empty()) {
    throw ValidationError("unknown synthetic config key '" + *unused.begin() + "'");
  }
  return c;
}

DocumentStore SynthCorpus::document_store() const {
  DocumentStore store(graph.num_pages());
  for (std::size_t i = 0; i < documents.size(); ++i) store.set_text(page_at(i), documents[i]);
  return store;
}

SynthCorpus generate(const SynthConfig& config) {
  config.validate();
  SynthCorpus out;
  out.config = config;
  const std::size_t n = config.num_pages;

  // Populations and planted quality.
  {
    auto gen = stream(config.rng_seed, Phase::Population);
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    const auto high = sample_without_replacement(ids, high_count(config), gen);
    out.high_population.assign(n, false);
    for (auto i : high) out.high_population[i] = true;
  }
  {
    auto gen = stream(config.rng_seed, Phase::Quality);
    out.planted_quality.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double mean = out.high_population[i] ? config.high_mean : config.low_mean;
      out.planted_quality[i] = std::clamp(rng::normal(gen, mean, config.quality_jitter), 0.0, 1.0);
    }
  }

  // Edges: quality-rank window with probability `assortativity`, else uniform.
  std::vector<std::vector<PageId>> adjacency(n);
  {
    std::vector<std::size_t> by_rank(n);
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
      if (out.planted_quality[a] != out.planted_quality[b]) return out.planted_quality[a] < out.planted_quality[b];
      return a < b;
    });
    std::vector<std::size_t> rank_of(n);
    for (std::size_t r = 0; r < n; ++r) rank_of[by_rank[r]] = r;

    const auto window = static_cast<std::int64_t>(
        std::min<double>(static_cast<double>(n - 1), std::max(10.0, 2.0 * config.avg_out_degree)));
    const auto last = static_cast<std::int64_t>(n - 1);
    auto gen = stream(config.rng_seed, Phase::Edges);
    std::vector<std::size_t> stamp(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t degree = draw_degree(config, gen);
      auto& targets = adjacency[u];
      targets.reserve(degree);
      stamp[u] = u + 1;
      std::size_t attempts = 0;
      while (targets.size() < degree && attempts < 50 * degree + 100) {
        ++attempts;
        std::size_t v;
        if (rng::bernoulli(gen, config.assortativity)) {
          auto offset = static_cast<std::int64_t>(rng::below(gen, static_cast<std::uint64_t>(2 * window))) - window;
          if (offset >= 0) ++offset;  // skip 0
          std::int64_t r = static_cast<std::int64_t>(rank_of[u]) + offset;
          if (r < 0) r = -r;
          if (r > last) r = 2 * last - r;
          if (r < 0 || r > last) continue;
          v = by_rank[static_cast<std::size_t>(r)];
        } else {
          v = rng::below(gen, n);
        }
        if (stamp[v] == u + 1) continue;
        stamp[v] = u + 1;
        targets.push_back(page_at(v));
      }
    }
  }

  std::vector<std::string> keys(n);
  const std::size_t width = std::to_string(n - 1).size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string digits = std::to_string(i);
    keys[i] = "p" + std::string(width - digits.size(), '0') + digits;
  }
  out.graph = WebGraph::from_adjacency(std::move(keys), adjacency);

  {
    auto gen = stream(config.rng_seed, Phase::Seeds);
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (auto i : sample_without_replacement(std::move(ids), config.num_seeds, gen)) out.seeds.seeds.push_back(page_at(i));
  }

  {
    const std::uint64_t noise_seed = rng::splitmix64(config.rng_seed ^ static_cast<std::uint64_t>(Phase::Estimator));
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = synthetic_score(page_at(i), out.planted_quality[i], config.estimator_noise, noise_seed);
    }
    out.quality = QualityTable(std::move(scores), 0.0);
  }

  std::vector<std::size_t> high_ids, low_ids;
  for (std::size_t i = 0; i < n; ++i) (out.high_population[i] ? high_ids : low_ids).push_back(i);
  const std::size_t relevant = relevant_count(config);
  {
    auto gen = stream(config.rng_seed, Phase::Natural);
    auto pages = sample_without_replacement(high_ids, relevant, gen);
    out.natural = plant_queries("natural", "nlq", std::move(pages), out, gen);
  }
  {
    auto gen = stream(config.rng_seed, Phase::Keyword);
    const std::size_t from_high = keyword_high_count(config);
    auto pages = sample_without_replacement(high_ids, from_high, gen);
    const auto low = sample_without_replacement(low_ids, relevant - from_high, gen);
    pages.insert(pages.end(), low.begin(), low.end());
    pages = sample_without_replacement(std::move(pages), pages.size(), gen);  // shuffle
    out.keyword = plant_queries("keyword", "kwq", std::move(pages), out, gen);
  }

  if (config.emit_documents) {
    auto gen = stream(config.rng_seed, Phase::Documents);
    out.documents.resize(n);
    std::vector<std::vector<std::string>> extra(n);
    for (const auto* set : {&out.natural, &out.keyword}) {
      const std::string prefix = set == &out.natural ? "nlq" : "kwq";
      for (std::size_t q = 0; q < set->qrels.num_queries(); ++q) {
        const auto& id = set->qrels.query_id(q);
        const std::string term = prefix + id.substr(id.rfind('-') + 1);
        for (const auto& j : set->qrels.judgments(q)) {
          const auto reps = 1 + rng::below(gen, 3);
          for (std::uint64_t r = 0; r < reps; ++r) extra[index_of(j.page)].push_back(term);
        }
      }
      const auto nq = set->qrels.num_queries();
      for (std::size_t i = 0; i < n; ++i) {
        if (!rng::bernoulli(gen, config.decoy_rate)) continue;
        const auto q = rng::below(gen, nq);
        if (set->qrels.grade(q, page_at(i)) > 0) continue;
        const auto& id = set->qrels.query_id(q);
        extra[i].push_back(prefix + id.substr(id.rfind('-') + 1));
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::string text;
      for (std::size_t w = 0; w < config.doc_length; ++w) {
        if (!text.empty()) text += ' ';
        text += 'w';
        text += std::to_string(rng::below(gen, config.vocabulary_size));
      }
      for (const auto& t : extra[i]) {
        if (!text.empty()) text += ' ';
        text += t;
      }
      out.documents[i] = std::move(text);
    }
  }
  return out;
}

void write_synth_corpus(const SynthCorpus& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  const auto& g = corpus.graph;

  std::ostringstream edges, seeds, quality, planted, nlq, nlr, kwq, kwr;
  write_edge_list(g, edges);
  write_seeds(corpus.seeds, g, seeds);
  write_quality_table(corpus.quality, g, quality);
  write_quality_table(QualityTable(corpus.planted_quality, 0.0), g, planted);
  write_queries(corpus.natural.queries, nlq);
  write_qrels(corpus.natural.qrels, g, nlr);
  write_queries(corpus.keyword.queries, kwq);
  write_qrels(corpus.keyword.qrels, g, kwr);
  write_text_file(path("edges.tsv"), edges.str());
  write_text_file(path("seeds.txt"), seeds.str());
  write_text_file(path("quality.tsv"), quality.str());
  write_text_file(path("planted_quality.tsv"), planted.str());
  write_text_file(path("queries-natural.tsv"), nlq.str());
  write_text_file(path("qrels-natural.txt"), nlr.str());
  write_text_file(path("queries-keyword.tsv"), kwq.str());
  write_text_file(path("qrels-keyword.txt"), kwr.str());
  if (!corpus.documents.empty()) {
    std::ostringstream docs;
    for (std::size_t i = 0; i < corpus.documents.size(); ++i) docs << g.key(page_at(i)) << '\t' << corpus.documents[i] << '\n';
    write_text_file(path("docs.tsv"), docs.str());
  }

  const auto& c = corpus.config;
  std::ostringstream conf;
  conf << "# synthetic corpus parameters\n"
       << "num_pages = " << c.num_pages << '\n'
       << "avg_out_degree = " << format_double(c.avg_out_degree) << '\n'
       << "degree_distribution = " << to_string(c.degree_distribution) << '\n'
       << "power_law_exponent = " << format_double(c.power_law_exponent) << '\n'
       << "assortativity = " << format_double(c.assortativity) << '\n'
       << "high_fraction = " << format_double(c.high_fraction) << '\n'
       << "high_mean = " << format_double(c.high_mean) << '\n'
       << "low_mean = " << format_double(c.low_mean) << '\n'
       << "quality_jitter = " << format_double(c.quality_jitter) << '\n'
       << "estimator_noise = " << format_double(c.estimator_noise) << '\n'
       << "relevant_fraction = " << format_double(c.relevant_fraction) << '\n'
       << "keyword_high_share = " << format_double(c.keyword_high_share) << '\n'
       << "queries_per_set = " << c.queries_per_set << '\n'
       << "num_seeds = " << c.num_seeds << '\n'
       << "emit_documents = " << (c.emit_documents ? "true" : "false") << '\n'
       << "doc_length = " << c.doc_length << '\n'
       << "vocabulary_size = " << c.vocabulary_size << '\n'
       << "decoy_rate = " << format_double(c.decoy_rate) << '\n'
       << "rng_seed = " << c.rng_seed << '\n';
  write_text_file(path("synth.conf"), conf.str());
}

double edge_quality_assortativity(const WebGraph& graph, const std::vector<double>& quality) {
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t u = 0; u < graph.num_pages(); ++u) {
    const double x = quality[u];
    for (PageId v : graph.outlinks(page_at(u))) {
      const double y = quality[index_of(v)];
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
      ++m;
    }
  }
  if (m < 2) return 0.0;
  const double dm = static_cast<double>(m);
  const double cov = sxy / dm - (sx / dm) * (sy / dm);
  const double vx = sxx / dm - (sx / dm) * (sx / dm);
  const double vy = syy / dm - (sy / dm) * (sy / dm);
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

double reachable_fraction(const WebGraph& graph, const SeedSet& seeds) {
  const std::size_t n = graph.num_pages();
  if (n == 0) return 0.0;
  std::vector<bool> seen(n, false);
  std::deque<PageId> queue;
  for (PageId s : seeds.seeds) {
    if (!seen[index_of(s)]) {
      seen[index_of(s)] = true;
      queue.push_back(s);
    }
  }
  std::size_t count = queue.size();
  while (!queue.empty()) {
    const PageId p = queue.front();
    queue.pop_front();
    for (PageId t : graph.outlinks(p)) {
      if (!seen[index_of(t)]) {
        seen[index_of(t)] = true;
        ++count;
        queue.push_back(t);
      }
    }
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace fsim
