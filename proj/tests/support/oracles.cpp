#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "fsim/random.hpp"
#include "fsim/tokenizer.hpp"

namespace fsim::oracle {

WebGraph random_graph(std::mt19937_64& gen, std::size_t num_pages, double avg_degree) {
  std::vector<std::string> keys;
  std::vector<std::vector<PageId>> adj(num_pages);
  for (std::size_t i = 0; i < num_pages; ++i) keys.push_back("n" + std::to_string(i));
  const auto max_degree = static_cast<std::uint64_t>(std::llround(2.0 * avg_degree));
  for (auto& links : adj) {
    const auto degree = rng::below(gen, max_degree + 1);
    for (std::uint64_t j = 0; j < degree; ++j) links.push_back(page_at(rng::below(gen, num_pages)));
  }
  return WebGraph::from_adjacency(std::move(keys), adj);
}

SeedSet random_seeds(std::mt19937_64& gen, const WebGraph& graph, std::size_t max_seeds) {
  const std::size_t n = graph.num_pages();
  const std::size_t count = 1 + rng::below(gen, std::min(max_seeds, n));
  std::vector<PageId> seeds;
  std::set<std::size_t> used;
  while (seeds.size() < count) {
    const auto i = rng::below(gen, n);
    if (used.insert(i).second) seeds.push_back(page_at(i));
  }
  return {seeds};
}

QualityTable random_quality(std::mt19937_64& gen, std::size_t num_pages, int distinct_levels) {
  std::vector<double> scores(num_pages);
  for (auto& s : scores) {
    // Few levels force many priority ties, which is where FIFO order matters.
    s = distinct_levels > 0 ? static_cast<double>(rng::below(gen, distinct_levels)) / distinct_levels
                            : rng::uniform(gen);
  }
  return QualityTable(std::move(scores), 0.0);
}

Qrels random_qrels(std::mt19937_64& gen, std::size_t num_pages, std::size_t num_queries, double rate) {
  std::vector<std::pair<std::string, std::vector<Judgment>>> per_query(num_queries);
  for (std::size_t q = 0; q < num_queries; ++q) per_query[q].first = "q" + std::to_string(q);
  for (std::size_t p = 0; p < num_pages; ++p) {
    if (!rng::bernoulli(gen, rate)) continue;
    const auto q = rng::below(gen, num_queries);
    per_query[q].second.push_back({page_at(p), 1 + static_cast<int>(rng::below(gen, 2))});
  }
  return Qrels::from_judgments(std::move(per_query));
}

WebGraph graph_from_pairs(const std::vector<std::pair<std::string, std::string>>& edges) {
  std::vector<std::string> keys;
  std::map<std::string, std::size_t> index;
  auto id = [&](const std::string& k) {
    auto [it, fresh] = index.emplace(k, keys.size());
    if (fresh) keys.push_back(k);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> ids;
  for (const auto& [s, d] : edges) {
    const auto a = id(s);
    const auto b = id(d);
    ids.emplace_back(a, b);
  }
  std::vector<std::vector<PageId>> adj(keys.size());
  for (auto [a, b] : ids) adj[a].push_back(page_at(b));
  return WebGraph::from_adjacency(std::move(keys), adj);
}

std::vector<PageId> queue_bfs(const WebGraph& graph, const SeedSet& seeds, std::size_t budget) {
  std::vector<bool> seen(graph.num_pages(), false);
  std::deque<PageId> queue;
  for (PageId s : seeds.seeds) {
    seen[index_of(s)] = true;
    queue.push_back(s);
  }
  std::vector<PageId> order;
  while (!queue.empty() && order.size() < budget) {
    const PageId p = queue.front();
    queue.pop_front();
    order.push_back(p);
    for (PageId q : graph.outlinks(p)) {
      if (!seen[index_of(q)]) {
        seen[index_of(q)] = true;
        queue.push_back(q);
      }
    }
  }
  return order;
}

NaiveCrawl naive_crawl(const WebGraph& graph, const SeedSet& seeds, const QualityTable& quality, PolicyKind policy,
                       std::size_t budget) {
  struct Entry {
    PageId page;
    double priority;
    std::uint64_t seq;
    bool seed;
  };
  std::vector<Entry> frontier;
  std::vector<bool> crawled(graph.num_pages(), false);
  std::uint64_t seq = 0;
  const double top = std::numeric_limits<double>::infinity();
  for (PageId s : seeds.seeds) frontier.push_back({s, top, seq++, true});

  NaiveCrawl out;
  while (!frontier.empty() && out.order.size() < budget) {
    std::sort(frontier.begin(), frontier.end(), [](const Entry& a, const Entry& b) {
      return a.priority != b.priority ? a.priority > b.priority : a.seq < b.seq;
    });
    const PageId p = frontier.front().page;
    frontier.erase(frontier.begin());
    crawled[index_of(p)] = true;
    out.order.push_back(p);
    const double qp = quality.score(p);
    for (PageId t : graph.outlinks(p)) {
      if (crawled[index_of(t)]) continue;
      auto it = std::find_if(frontier.begin(), frontier.end(), [&](const Entry& e) { return e.page == t; });
      if (it != frontier.end()) {
        if (policy == PolicyKind::QMin && !it->seed && qp < it->priority) {
          it->priority = qp;
          ++out.priority_updates;
        }
        continue;
      }
      double priority = 0.0;
      switch (policy) {
        case PolicyKind::Bfs: priority = 0.0; break;
        case PolicyKind::QOracle: priority = quality.score(t); break;
        case PolicyKind::QFirst:
        case PolicyKind::QMin: priority = qp; break;
      }
      frontier.push_back({t, priority, seq++, false});
    }
  }
  return out;
}

void SortedListFrontier::push(PageId page, double priority) {
  if (contains(page)) throw std::logic_error("duplicate push");
  entries_.push_back({page, priority, next_seq_++});
  resort();
}

void SortedListFrontier::update(PageId page, double priority) {
  for (auto& e : entries_) {
    if (e.page == page) {
      e.priority = priority;
      resort();
      return;
    }
  }
  throw std::logic_error("update of absent page");
}

PageId SortedListFrontier::pop() {
  if (entries_.empty()) throw std::logic_error("pop from empty frontier");
  const PageId p = entries_.front().page;
  entries_.erase(entries_.begin());
  return p;
}

bool SortedListFrontier::contains(PageId page) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.page == page; });
}

void SortedListFrontier::resort() {
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.priority != b.priority ? a.priority > b.priority : a.seq < b.seq;
  });
}

std::vector<BruteScore> brute_force_bm25(const DocumentStore& docs, const std::vector<PageId>& indexed,
                                         const std::string& query, std::size_t k, double k1, double b) {
  std::vector<PageId> with_text;
  for (PageId p : indexed) {
    if (docs.has_text(p)) with_text.push_back(p);
  }
  const double n = static_cast<double>(with_text.size());
  double total_length = 0.0;
  for (PageId p : with_text) total_length += static_cast<double>(docs.tokens(p).size());
  const double avgdl = with_text.empty() ? 0.0 : total_length / n;

  const auto terms_vec = tokenize(query);
  const std::set<std::string> terms(terms_vec.begin(), terms_vec.end());

  std::vector<BruteScore> scored;
  for (PageId p : with_text) {
    double score = 0.0;
    bool matched = false;
    for (const auto& term : terms) {
      const auto id = docs.find_term(term);
      if (!id) continue;
      double df = 0.0;
      for (PageId other : with_text) {
        const auto toks = docs.tokens(other);
        if (std::find(toks.begin(), toks.end(), *id) != toks.end()) df += 1.0;
      }
      const auto toks = docs.tokens(p);
      const double tf = static_cast<double>(std::count(toks.begin(), toks.end(), *id));
      if (tf == 0.0) continue;
      matched = true;
      const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      const double len = static_cast<double>(toks.size());
      score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avgdl));
    }
    if (matched) scored.push_back({p, score});
  }
  std::sort(scored.begin(), scored.end(), [](const BruteScore& x, const BruteScore& y) {
    const double rx = std::round(x.score * 1e9);
    const double ry = std::round(y.score * 1e9);
    return rx != ry ? rx > ry : index_of(x.page) < index_of(y.page);
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

double brute_force_ndcg(const std::vector<PageId>& ranked, const std::vector<std::pair<PageId, int>>& judgments,
                        std::size_t k) {
  std::unordered_map<std::uint32_t, int> grade;
  std::vector<int> grades;
  for (auto [p, g] : judgments) {
    grade[static_cast<std::uint32_t>(p)] = g;
    grades.push_back(g);
  }
  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
    const auto it = grade.find(static_cast<std::uint32_t>(ranked[i]));
    const int g = it == grade.end() ? 0 : it->second;
    dcg += (std::pow(2.0, g) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  std::sort(grades.rbegin(), grades.rend());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    ideal += (std::pow(2.0, grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return ideal == 0.0 ? 0.0 : dcg / ideal;
}

}  // namespace fsim::oracle
