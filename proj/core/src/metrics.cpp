#include "fsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace fsim {

std::optional<std::size_t> RelevantArrivals::find(std::string_view query_id) const {
  const auto it = std::find(query_ids.begin(), query_ids.end(), query_id);
  if (it == query_ids.end()) return std::nullopt;
  return static_cast<std::size_t>(it - query_ids.begin());
}

RelevantArrivals relevant_arrivals(std::span<const PageId> order, const Qrels& qrels) {
  RelevantArrivals out;
  out.crawl_length = order.size();
  out.union_total = qrels.relevant_union().size();
  out.query_ids.reserve(qrels.num_queries());
  out.per_query.resize(qrels.num_queries());
  out.per_query_total.reserve(qrels.num_queries());

  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> queries_of;
  for (std::size_t q = 0; q < qrels.num_queries(); ++q) {
    out.query_ids.push_back(qrels.query_id(q));
    out.per_query_total.push_back(qrels.relevant_count(q));
    for (const auto& j : qrels.judgments(q)) {
      if (j.grade > 0) queries_of[static_cast<std::uint32_t>(j.page)].push_back(static_cast<std::uint32_t>(q));
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto it = queries_of.find(static_cast<std::uint32_t>(order[i]));
    if (it == queries_of.end()) continue;
    const CrawlTime t = i + 1;
    out.union_times.push_back(t);
    for (auto q : it->second) out.per_query[q].push_back(t);
  }
  return out;
}

std::size_t relevant_crawled(const RelevantArrivals& arrivals, CrawlTime t) {
  const auto& ts = arrivals.union_times;
  return static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
}

double harvest_rate(const RelevantArrivals& arrivals, CrawlTime t) {
  if (t == 0) throw std::invalid_argument("harvest rate needs t >= 1");
  return static_cast<double>(relevant_crawled(arrivals, t)) / static_cast<double>(t);
}

double ideal_dcg_unit_gain(std::size_t count) {
  double sum = 0.0;
  for (std::size_t i = 1; i <= count; ++i) sum += 1.0 / std::log2(static_cast<double>(i + 1));
  return sum;
}

double max_ndcg(const RelevantArrivals& arrivals, std::size_t query_index, CrawlTime t, bool normalize) {
  if (t == 0) throw std::invalid_argument("maxNDCG needs t >= 1");
  if (query_index >= arrivals.per_query.size()) throw std::invalid_argument("query index out of range");
  const auto& ts = arrivals.per_query[query_index];
  const auto crawled = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  const double raw = ideal_dcg_unit_gain(crawled);
  if (!normalize) return raw;
  const double ideal = ideal_dcg_unit_gain(arrivals.per_query_total[query_index]);
  return ideal > 0.0 ? raw / ideal : 0.0;
}

double max_ndcg(const RelevantArrivals& arrivals, std::string_view query_id, CrawlTime t, bool normalize) {
  const auto q = arrivals.find(query_id);
  if (!q) throw std::invalid_argument("unknown query '" + std::string(query_id) + "'");
  return max_ndcg(arrivals, *q, t, normalize);
}

std::optional<CrawlTime> time_to_relevant(const RelevantArrivals& arrivals, std::size_t n) {
  if (n == 0 || n > arrivals.union_times.size()) return std::nullopt;
  return arrivals.union_times[n - 1];
}

std::optional<double> speedup(const RelevantArrivals& a, const RelevantArrivals& b, std::size_t n) {
  const auto ta = time_to_relevant(a, n);
  const auto tb = time_to_relevant(b, n);
  if (!ta || !tb) return std::nullopt;
  return static_cast<double>(*tb) / static_cast<double>(*ta);
}

MeanSpeedup mean_speedup_detail(const RelevantArrivals& a, const RelevantArrivals& b) {
  const std::size_t na = a.union_times.size();
  const std::size_t nb = b.union_times.size();
  const std::size_t n_max = std::min(na, nb);
  if (n_max == 0) throw UndefinedStatistic("mean speedup: a crawl reached no relevant page");
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) sum += *speedup(a, b, n);
  return {sum / static_cast<double>(n_max), n_max, std::max(na, nb) - n_max};
}

double mean_speedup(const RelevantArrivals& a, const RelevantArrivals& b) { return mean_speedup_detail(a, b).value; }

void MetricSeries::add(CrawlTime t, double value) {
  if (!points_.empty() && t <= points_.back().first) throw std::invalid_argument("metric series times must increase");
  if (!std::isfinite(value)) throw std::invalid_argument("metric series values must be finite");
  points_.emplace_back(t, value);
}

MetricSeries harvest_rate_series(const RelevantArrivals& arrivals, std::span<const CrawlTime> checkpoints,
                                 SeriesLabel label) {
  MetricSeries series(std::move(label));
  for (CrawlTime t : checkpoints) series.add(t, harvest_rate(arrivals, t));
  return series;
}

std::vector<double> max_ndcg_per_query(const RelevantArrivals& arrivals, CrawlTime t, bool normalize) {
  std::vector<double> out;
  out.reserve(arrivals.per_query.size());
  for (std::size_t q = 0; q < arrivals.per_query.size(); ++q) out.push_back(max_ndcg(arrivals, q, t, normalize));
  return out;
}

MetricSeries max_ndcg_series(const RelevantArrivals& arrivals, std::span<const CrawlTime> checkpoints,
                             SeriesLabel label, bool normalize) {
  MetricSeries series(std::move(label));
  for (CrawlTime t : checkpoints) {
    const auto values = max_ndcg_per_query(arrivals, t, normalize);
    double sum = 0.0;
    for (double v : values) sum += v;
    series.add(t, values.empty() ? 0.0 : sum / static_cast<double>(values.size()));
  }
  return series;
}

}  // namespace fsim
