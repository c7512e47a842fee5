#pragma once

// Checkpoint retrieval evaluation: BM25 over the pages crawled so far, an
// optional rerank stage, and nDCG@k against the qrels.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsim/corpus.hpp"
#include "fsim/simulator.hpp"
#include "fsim/types.hpp"

namespace fsim {

struct Posting {
  PageId page;
  std::uint32_t tf;
};

class InvertedIndex {
 public:
  InvertedIndex() = default;

  /// Indexes exactly the pages in `crawled` that have text. Pages without text
  /// are skipped and counted in missing_text().
  static InvertedIndex build(const DocumentStore& docs, std::span<const PageId> crawled);

  std::size_t num_docs() const noexcept { return num_docs_; }
  double avg_doc_length() const noexcept { return avg_doc_length_; }
  std::size_t missing_text() const noexcept { return missing_text_; }
  std::size_t num_terms() const noexcept { return postings_.size(); }

  /// Sorted by page; empty for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  /// Token count of an indexed page; 0 for pages outside the index.
  std::uint32_t doc_length(PageId page) const;

 private:
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::uint32_t, std::uint32_t> doc_lengths_;
  std::size_t num_docs_ = 0;
  double avg_doc_length_ = 0.0;
  std::size_t missing_text_ = 0;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5)).
double bm25_idf(std::size_t num_docs, std::size_t doc_freq);

struct ScoredDoc {
  PageId page;
  double score;
};

/// Sorted by score descending, ties by page ascending; at most `depth` docs.
struct Ranking {
  std::string query_id;
  std::vector<ScoredDoc> docs;
  std::size_t depth = 0;
};

/// Orders by (score rounded to 1e-9 desc, page asc) so float summation jitter
/// cannot reorder near-equal scores.
bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) noexcept;

/// BM25 top-k. Each distinct query term counts once. Documents with no query
/// term are not returned.
Ranking bm25_search(const InvertedIndex& index, std::string_view query_id, std::string_view query_text, std::size_t k,
                    Bm25Params params = {});

/// Second-stage reranker seam (a cross-encoder in a full pipeline).
class Reranker {
 public:
  virtual ~Reranker() = default;
  virtual Ranking rerank(Ranking ranking, std::string_view query_text) const = 0;
};

class IdentityReranker final : public Reranker {
 public:
  Ranking rerank(Ranking ranking, std::string_view) const override { return ranking; }
};

/// DCG@k with gain 2^grade - 1 and discount 1/log2(rank + 1), normalized by the
/// ideal DCG@k over the query's full qrels. Throws std::invalid_argument for
/// an unknown query or k == 0.
double ndcg_at_k(const Ranking& ranking, const Qrels& qrels, std::size_t k);

struct CheckpointEvaluation {
  CrawlTime t = 0;
  double mean_ndcg = 0.0;
  /// (query id, nDCG@k) in qrels order, for queries that have text.
  std::vector<std::pair<std::string, double>> per_query;
  std::vector<Ranking> rankings;
  /// Crawled pages without document text (not indexed).
  std::size_t missing_text = 0;
  /// Judged queries absent from the query set (not evaluated).
  std::size_t queries_without_text = 0;
};

struct RetrievalOptions {
  std::size_t first_stage_depth = 100;
  std::size_t cutoff = 10;
  Bm25Params bm25;
};

/// Rebuilds the index over order[0, t) and evaluates every judged query.
CheckpointEvaluation evaluate_prefix(std::span<const PageId> order, CrawlTime t, const DocumentStore& docs,
                                     const QuerySet& queries, const Qrels& qrels, const Reranker& reranker,
                                     const RetrievalOptions& options = {});

/// evaluate_prefix at trace.checkpoints[checkpoint_index]. Throws
/// std::out_of_range for a missing checkpoint.
CheckpointEvaluation evaluate_checkpoint(const CrawlTrace& trace, std::size_t checkpoint_index,
                                         const DocumentStore& docs, const QuerySet& queries, const Qrels& qrels,
                                         const Reranker& reranker = IdentityReranker{},
                                         const RetrievalOptions& options = {});

/// TREC run lines: `qid Q0 docid rank score run_tag`.
void write_run(std::span<const Ranking> rankings, const WebGraph& graph, std::string_view run_tag, std::ostream& out);

}  // namespace fsim
