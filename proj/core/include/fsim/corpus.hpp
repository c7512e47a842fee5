#pragma once

// The crawl universe: web graph, seeds, queries, relevance judgments, quality
// scores and (optionally) tokenized document text, plus the loaders and
// writers for their text formats.
//
// File formats (UTF-8, `#` comment lines and blank lines ignored):
//   edge list   `src<TAB>dst`, or a bare `key` line declaring a page
//   seeds       one key per line
//   queries     `qid<TAB>text`
//   qrels       `qid 0 docid grade` (any whitespace)
//   quality     `docid<TAB>score`
//   documents   `docid<TAB>text`

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fsim/quality.hpp"
#include "fsim/types.hpp"

namespace fsim {

/// Non-fatal loader findings (skipped records, overwritten duplicates).
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string msg) { warnings.push_back(std::move(msg)); }
};

/// Immutable snapshot graph in CSR form. Out-link lists are deduplicated, free
/// of self-links and keep first-occurrence input order.
class WebGraph {
 public:
  WebGraph() = default;

  /// Builds a graph from per-page adjacency; duplicates and self-links are
  /// dropped here. `dangling` flags pages materialized from out-link targets
  /// that had no record of their own (may be empty: no dangling pages).
  static WebGraph from_adjacency(std::vector<std::string> keys,
                                 const std::vector<std::vector<PageId>>& adjacency,
                                 std::vector<bool> dangling = {});

  std::size_t num_pages() const noexcept { return keys_.size(); }
  std::size_t num_edges() const noexcept { return targets_.size(); }
  std::size_t dangling_count() const noexcept { return dangling_count_; }
  bool is_dangling(PageId p) const { return !dangling_.empty() && dangling_[index_of(p)]; }

  std::span<const PageId> outlinks(PageId p) const {
    const auto i = index_of(p);
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }

  const std::string& key(PageId p) const { return keys_[index_of(p)]; }
  const std::vector<std::string>& keys() const noexcept { return keys_; }
  std::optional<PageId> find(std::string_view key) const;

  /// Stable 64-bit fingerprint of keys and edges (FNV-1a).
  std::uint64_t digest() const;

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, PageId> key_index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<PageId> targets_;
  std::vector<bool> dangling_;
  std::size_t dangling_count_ = 0;
};

struct SeedSet {
  std::vector<PageId> seeds;
};

struct Query {
  std::string id;
  std::string text;
};

struct QuerySet {
  std::vector<Query> queries;

  const Query* find(std::string_view id) const;
};

struct Judgment {
  PageId page;
  int grade;
};

/// Relevance judgments restricted to pages of one graph. Only queries with at
/// least one positively graded page are kept; query order is first appearance.
class Qrels {
 public:
  Qrels() = default;

  /// `per_query` may contain zero grades; entries are sorted by page and
  /// queries without a positive grade are dropped (and counted).
  static Qrels from_judgments(std::vector<std::pair<std::string, std::vector<Judgment>>> per_query);

  std::size_t num_queries() const noexcept { return ids_.size(); }
  const std::string& query_id(std::size_t q) const { return ids_[q]; }
  std::optional<std::size_t> find(std::string_view query_id) const;

  /// Sorted by page.
  std::span<const Judgment> judgments(std::size_t q) const { return judgments_[q]; }
  /// Grade of `page` for query `q`, 0 when unjudged.
  int grade(std::size_t q, PageId page) const;
  /// |R^q|: pages with grade > 0.
  std::size_t relevant_count(std::size_t q) const { return relevant_counts_[q]; }

  /// Sorted union over queries of positively graded pages.
  const std::vector<PageId>& relevant_union() const noexcept { return relevant_union_; }

  std::size_t dropped_queries() const noexcept { return dropped_queries_; }
  std::size_t dropped_judgments() const noexcept { return dropped_judgments_; }
  void add_dropped_judgments(std::size_t n) noexcept { dropped_judgments_ += n; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Judgment>> judgments_;
  std::vector<std::size_t> relevant_counts_;
  std::vector<PageId> relevant_union_;
  std::size_t dropped_queries_ = 0;
  std::size_t dropped_judgments_ = 0;
};

using TermId = std::uint32_t;

/// Per-page token sequences over a shared vocabulary. Pages without supplied
/// text have no tokens and `has_text() == false`.
class DocumentStore {
 public:
  DocumentStore() = default;
  explicit DocumentStore(std::size_t num_pages) : docs_(num_pages), has_text_(num_pages, false) {}

  void set_text(PageId page, std::string_view text);

  std::size_t num_pages() const noexcept { return docs_.size(); }
  std::size_t num_with_text() const noexcept { return num_with_text_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool has_text(PageId page) const { return has_text_[index_of(page)]; }
  std::span<const TermId> tokens(PageId page) const { return docs_[index_of(page)]; }
  std::optional<TermId> find_term(std::string_view term) const;
  const std::string& term(TermId id) const { return terms_[id]; }

 private:
  TermId intern(std::string term);

  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId> term_index_;
  std::vector<std::vector<TermId>> docs_;
  std::vector<bool> has_text_;
  std::size_t num_with_text_ = 0;
};

// Loaders. `source` names the stream in error messages. Path overloads throw
// LoadError when the file cannot be opened.

WebGraph load_edge_list(std::istream& in, const std::string& source = "<edges>");
WebGraph load_edge_list(const std::string& path);

SeedSet load_seeds(std::istream& in, const WebGraph& graph, const std::string& source = "<seeds>");
SeedSet load_seeds(const std::string& path, const WebGraph& graph);

QuerySet load_queries(std::istream& in, const std::string& source = "<queries>");
QuerySet load_queries(const std::string& path);

Qrels load_qrels(std::istream& in, const WebGraph& graph, Diagnostics* diag = nullptr,
                 const std::string& source = "<qrels>");
Qrels load_qrels(const std::string& path, const WebGraph& graph, Diagnostics* diag = nullptr);

QualityTable load_quality_table(std::istream& in, const WebGraph& graph, double default_score = 0.0,
                                Diagnostics* diag = nullptr, const std::string& source = "<quality>");
QualityTable load_quality_table(const std::string& path, const WebGraph& graph, double default_score = 0.0,
                                Diagnostics* diag = nullptr);

DocumentStore load_documents(std::istream& in, const WebGraph& graph, Diagnostics* diag = nullptr,
                             const std::string& source = "<documents>");
DocumentStore load_documents(const std::string& path, const WebGraph& graph, Diagnostics* diag = nullptr);

// Writers. The edge-list writer declares every page first, in id order, so a
// reload reproduces identical ids.

void write_edge_list(const WebGraph& graph, std::ostream& out);
void write_seeds(const SeedSet& seeds, const WebGraph& graph, std::ostream& out);
void write_queries(const QuerySet& queries, std::ostream& out);
void write_qrels(const Qrels& qrels, const WebGraph& graph, std::ostream& out);
void write_quality_table(const QualityTable& table, const WebGraph& graph, std::ostream& out);

/// Writes `text` verbatim to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::string& path, std::string_view text);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace fsim
