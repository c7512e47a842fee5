#pragma once

// Crawl effectiveness and efficiency metrics. Time t is the number of pages
// crawled so far (seeds included), one unit per page.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsim/corpus.hpp"
#include "fsim/types.hpp"

namespace fsim {

/// Crawl times at which relevant pages arrived, per query and for the union
/// of all queries in one query set. All time lists are ascending.
struct RelevantArrivals {
  std::vector<CrawlTime> union_times;
  std::size_t union_total = 0;
  std::vector<std::string> query_ids;
  std::vector<std::vector<CrawlTime>> per_query;
  /// |R^q| over the whole corpus.
  std::vector<std::size_t> per_query_total;
  CrawlTime crawl_length = 0;

  std::optional<std::size_t> find(std::string_view query_id) const;
};

RelevantArrivals relevant_arrivals(std::span<const PageId> order, const Qrels& qrels);

/// |R^Q_t|: union-relevant pages crawled at or before t.
std::size_t relevant_crawled(const RelevantArrivals& arrivals, CrawlTime t);

/// HR(Q, t) = |R^Q_t| / t. Throws std::invalid_argument for t == 0.
double harvest_rate(const RelevantArrivals& arrivals, CrawlTime t);

/// Ideal DCG over the relevant pages of one query crawled by t:
/// sum_{i=1}^{|R^q_t|} 1 / log2(i + 1). With `normalize`, divided by the same
/// sum over all |R^q| relevant pages. Throws std::invalid_argument for an
/// unknown query or t == 0.
double max_ndcg(const RelevantArrivals& arrivals, std::string_view query_id, CrawlTime t, bool normalize = false);
double max_ndcg(const RelevantArrivals& arrivals, std::size_t query_index, CrawlTime t, bool normalize = false);

/// sum_{i=1}^{count} 1 / log2(i + 1).
double ideal_dcg_unit_gain(std::size_t count);

/// tau_X(n): crawl time of the n-th union-relevant arrival, if reached.
std::optional<CrawlTime> time_to_relevant(const RelevantArrivals& arrivals, std::size_t n);

/// s_{A,B}(n) = tau_B(n) / tau_A(n); nullopt when either crawl never reached
/// n relevant pages (or n == 0).
std::optional<double> speedup(const RelevantArrivals& a, const RelevantArrivals& b, std::size_t n);

struct MeanSpeedup {
  double value;
  /// Speedups averaged over n = 1..n_max.
  std::size_t n_max;
  /// Relevant counts reached by only one of the two crawls (excluded).
  std::size_t undefined_points;
};

/// Mean of s_{A,B}(n) over n = 1..min(|R^Q| crawled by A, by B). Throws
/// UndefinedStatistic when that minimum is 0.
MeanSpeedup mean_speedup_detail(const RelevantArrivals& a, const RelevantArrivals& b);
double mean_speedup(const RelevantArrivals& a, const RelevantArrivals& b);

struct SeriesLabel {
  std::string policy;
  std::string metric;
  std::string query_set;
};

/// Per-checkpoint curve of one metric. Times strictly increase, values finite.
class MetricSeries {
 public:
  MetricSeries() = default;
  explicit MetricSeries(SeriesLabel label) : label_(std::move(label)) {}

  /// Throws std::invalid_argument on a non-increasing t or non-finite value.
  void add(CrawlTime t, double value);

  const SeriesLabel& label() const noexcept { return label_; }
  const std::vector<std::pair<CrawlTime, double>>& points() const noexcept { return points_; }

 private:
  SeriesLabel label_;
  std::vector<std::pair<CrawlTime, double>> points_;
};

MetricSeries harvest_rate_series(const RelevantArrivals& arrivals, std::span<const CrawlTime> checkpoints,
                                 SeriesLabel label);

/// Mean over queries of max_ndcg at each checkpoint.
MetricSeries max_ndcg_series(const RelevantArrivals& arrivals, std::span<const CrawlTime> checkpoints,
                             SeriesLabel label, bool normalize = false);

/// Per-query max_ndcg values at t, in query order.
std::vector<double> max_ndcg_per_query(const RelevantArrivals& arrivals, CrawlTime t, bool normalize = false);

}  // namespace fsim
