#include "fsim/quality.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fsim/random.hpp"

namespace fsim {

QualityTable::QualityTable(std::vector<double> scores, double default_score)
    : scores_(std::move(scores)), default_score_(default_score) {
  if (!std::isfinite(default_score_)) throw std::invalid_argument("quality default score must be finite");
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i])) {
      throw std::invalid_argument("non-finite quality score for page " + std::to_string(i));
    }
  }
}

QualityTable QualityTable::filled(std::size_t num_pages, double default_score) {
  return QualityTable(std::vector<double>(num_pages, default_score), default_score);
}

double QualityTable::score(PageId page) const {
  const auto i = index_of(page);
  if (i >= scores_.size()) {
    throw std::out_of_range("page " + std::to_string(i) + " outside quality table of size " +
                            std::to_string(scores_.size()));
  }
  return scores_[i];
}

double synthetic_score(PageId page, double planted_quality, double noise_sigma, std::uint64_t rng_seed) {
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be non-negative");
  if (noise_sigma == 0.0) return planted_quality;
  const std::uint64_t base = rng::splitmix64(rng_seed ^ rng::splitmix64(index_of(page)));
  const double u1 = rng::to_unit(rng::splitmix64(base));
  const double u2 = rng::to_unit(rng::splitmix64(base + 1));
  return planted_quality + noise_sigma * rng::standard_normal(u1, u2);
}

}  // namespace fsim
