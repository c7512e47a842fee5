#pragma once

#include <cstdint>
#include <vector>

#include "fsim/types.hpp"

namespace fsim {

/// Precomputed page quality scores (the output of an offline quality
/// estimator), indexed by PageId. Immutable once built; every lookup is finite.
class QualityTable {
 public:
  QualityTable() = default;

  /// `scores` must have one finite entry per page. Pages that had no score in
  /// the source file are expected to already hold `default_score`.
  QualityTable(std::vector<double> scores, double default_score);

  /// All pages at `default_score`.
  static QualityTable filled(std::size_t num_pages, double default_score);

  /// Throws std::out_of_range for a page outside the table.
  double score(PageId page) const;

  std::size_t size() const noexcept { return scores_.size(); }
  double default_score() const noexcept { return default_score_; }
  const std::vector<double>& scores() const noexcept { return scores_; }

  /// Applies `f` to every score and the default. Used to check that crawls
  /// depend only on the ordering of scores.
  template <typename F>
  QualityTable transformed(F&& f) const {
    std::vector<double> out;
    out.reserve(scores_.size());
    for (double s : scores_) out.push_back(f(s));
    return QualityTable(std::move(out), f(default_score_));
  }

 private:
  std::vector<double> scores_;
  double default_score_ = 0.0;
};

/// Deterministic test scorer: `planted_quality` plus Gaussian noise whose draw
/// depends only on (rng_seed, page). With `noise_sigma == 0` the planted value
/// is returned exactly. Throws std::invalid_argument for a negative sigma.
double synthetic_score(PageId page, double planted_quality, double noise_sigma, std::uint64_t rng_seed);

}  // namespace fsim
