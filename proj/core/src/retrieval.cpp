#include "fsim/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "fsim/tokenizer.hpp"

namespace fsim {

InvertedIndex InvertedIndex::build(const DocumentStore& docs, std::span<const PageId> crawled) {
  InvertedIndex index;
  std::uint64_t total_length = 0;
  std::unordered_map<TermId, std::uint32_t> tf;
  for (PageId page : crawled) {
    if (!docs.has_text(page)) {
      ++index.missing_text_;
      continue;
    }
    const auto tokens = docs.tokens(page);
    tf.clear();
    for (TermId id : tokens) ++tf[id];
    for (const auto& [id, count] : tf) index.postings_[docs.term(id)].push_back({page, count});
    index.doc_lengths_[static_cast<std::uint32_t>(page)] = static_cast<std::uint32_t>(tokens.size());
    total_length += tokens.size();
    ++index.num_docs_;
  }
  for (auto& [term, list] : index.postings_) {
    std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) { return a.page < b.page; });
  }
  index.avg_doc_length_ =
      index.num_docs_ == 0 ? 0.0 : static_cast<double>(total_length) / static_cast<double>(index.num_docs_);
  return index;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  const auto it = postings_.find(std::string(term));
  if (it == postings_.end()) return {};
  return it->second;
}

std::uint32_t InvertedIndex::doc_length(PageId page) const {
  const auto it = doc_lengths_.find(static_cast<std::uint32_t>(page));
  return it == doc_lengths_.end() ? 0 : it->second;
}

double bm25_idf(std::size_t num_docs, std::size_t doc_freq) {
  const double n = static_cast<double>(num_docs);
  const double df = static_cast<double>(doc_freq);
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) noexcept {
  const double ra = std::round(a.score * 1e9);
  const double rb = std::round(b.score * 1e9);
  if (ra != rb) return ra > rb;
  return a.page < b.page;
}

Ranking bm25_search(const InvertedIndex& index, std::string_view query_id, std::string_view query_text, std::size_t k,
                    Bm25Params params) {
  Ranking ranking;
  ranking.query_id = std::string(query_id);
  ranking.depth = k;
  if (k == 0 || index.num_docs() == 0) return ranking;

  // std::set gives a fixed term order, hence a fixed summation order.
  const auto tokens = tokenize(query_text);
  const std::set<std::string> terms(tokens.begin(), tokens.end());
  std::map<PageId, double> scores;
  const double avgdl = index.avg_doc_length();
  for (const auto& term : terms) {
    const auto list = index.postings(term);
    if (list.empty()) continue;
    const double idf = bm25_idf(index.num_docs(), list.size());
    for (const auto& posting : list) {
      const double tf = posting.tf;
      const double dl = index.doc_length(posting.page);
      const double norm = params.k1 * (1.0 - params.b + params.b * dl / avgdl);
      scores[posting.page] += idf * tf * (params.k1 + 1.0) / (tf + norm);
    }
  }
  ranking.docs.reserve(scores.size());
  for (const auto& [page, score] : scores) ranking.docs.push_back({page, score});
  const std::size_t keep = std::min(k, ranking.docs.size());
  std::partial_sort(ranking.docs.begin(), ranking.docs.begin() + static_cast<std::ptrdiff_t>(keep), ranking.docs.end(),
                    ranks_before);
  ranking.docs.resize(keep);
  return ranking;
}

double ndcg_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k) {
  if (k == 0) throw std::invalid_argument("nDCG cutoff must be at least 1");
  const auto q = qrels.find(ranking.query_id);
  if (!q) throw std::invalid_argument("unknown query '" + ranking.query_id + "'");

  double dcg = 0.0;
  const std::size_t depth = std::min(k, ranking.docs.size());
  for (std::size_t i = 0; i < depth; ++i) {
    const int grade = qrels.grade(*q, ranking.docs[i].page);
    if (grade > 0) dcg += (std::exp2(grade) - 1.0) / std::log2(static_cast<double>(i + 2));
  }
  if (dcg == 0.0) return 0.0;

  std::vector<int> grades;
  for (const auto& j : qrels.judgments(*q)) {
    if (j.grade > 0) grades.push_back(j.grade);
  }
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    ideal += (std::exp2(grades[i]) - 1.0) / std::log2(static_cast<double>(i + 2));
  }
  return dcg / ideal;
}

CheckpointEvaluation evaluate_prefix(std::span<const PageId> order, CrawlTime t, const DocumentStore& docs,
                                     const QuerySet& queries, const Qrels& qrels, const Reranker& reranker,
                                     const RetrievalOptions& options) {
  if (t > order.size()) throw std::out_of_range("evaluation time beyond crawl length");
  CheckpointEvaluation eval;
  eval.t = t;
  const auto index = InvertedIndex::build(docs, order.first(t));
  eval.missing_text = index.missing_text();

  double sum = 0.0;
  for (std::size_t q = 0; q < qrels.num_queries(); ++q) {
    const auto& id = qrels.query_id(q);
    const Query* query = queries.find(id);
    if (!query) {
      ++eval.queries_without_text;
      continue;
    }
    auto ranking = bm25_search(index, id, query->text, options.first_stage_depth, options.bm25);
    ranking = reranker.rerank(std::move(ranking), query->text);
    const double ndcg = ndcg_at_k(ranking, qrels, options.cutoff);
    sum += ndcg;
    eval.per_query.emplace_back(id, ndcg);
    eval.rankings.push_back(std::move(ranking));
  }
  eval.mean_ndcg = eval.per_query.empty() ? 0.0 : sum / static_cast<double>(eval.per_query.size());
  return eval;
}

CheckpointEvaluation evaluate_checkpoint(const CrawlTrace& trace, std::size_t checkpoint_index,
                                         const DocumentStore& docs, const QuerySet& queries, const Qrels& qrels,
                                         const Reranker& reranker, const RetrievalOptions& options) {
  if (checkpoint_index >= trace.checkpoints.size()) throw std::out_of_range("checkpoint index out of range");
  return evaluate_prefix(trace.order, trace.checkpoints[checkpoint_index], docs, queries, qrels, reranker, options);
}

void write_run(std::span<const Ranking> rankings, const WebGraph& graph, std::string_view run_tag, std::ostream& out) {
  for (const auto& r : rankings) {
    for (std::size_t i = 0; i < r.docs.size(); ++i) {
      out << r.query_id << " Q0 " << graph.key(r.docs[i].page) << ' ' << (i + 1) << ' '
          << format_double(r.docs[i].score) << ' ' << run_tag << '\n';
    }
  }
}

}  // namespace fsim
