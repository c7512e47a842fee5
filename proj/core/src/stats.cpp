#include "fsim/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

#include "fsim/types.hpp"

namespace fsim {

TestResult paired_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("paired t-test needs samples of equal length");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("paired t-test needs at least two pairs");

  // Two-pass mean and variance of the differences.
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += xs[i] - ys[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (xs[i] - ys[i]) - mean;
    ss += d * d;
  }
  const double variance = ss / static_cast<double>(n - 1);
  if (!(variance > 0.0)) throw UndefinedStatistic("paired t-test: differences have zero variance");

  const double t = mean / std::sqrt(variance / static_cast<double>(n));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return {t, std::min(p, 1.0)};
}

TestResult two_proportion_z_test(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("z-test sample sizes must be positive");
  if (x1 > n1 || x2 > n2) throw std::invalid_argument("z-test successes exceed sample size");
  const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  if (pooled <= 0.0 || pooled >= 1.0) throw UndefinedStatistic("z-test: pooled proportion is 0 or 1");
  const double se =
      std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  const double z = (p1 - p2) / se;
  const boost::math::normal_distribution<double> dist;
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(z)));
  return {z, std::min(p, 1.0)};
}

}  // namespace fsim
