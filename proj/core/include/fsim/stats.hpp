#pragma once

#include <cstdint>
#include <span>

namespace fsim {

struct TestResult {
  double statistic;
  /// Two-tailed.
  double p_value;
};

/// Two-tailed paired Student's t-test on xs[i] - ys[i] with n - 1 degrees of
/// freedom. Throws std::invalid_argument for mismatched lengths or n < 2, and
/// UndefinedStatistic when the differences have zero variance.
TestResult paired_t_test(std::span<const double> xs, std::span<const double> ys);

/// Two-tailed z-test for two proportions x1/n1 and x2/n2 with pooled variance.
/// Throws std::invalid_argument for n < 1 or x > n, and UndefinedStatistic
/// when the pooled proportion is 0 or 1.
TestResult two_proportion_z_test(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2);

}  // namespace fsim
