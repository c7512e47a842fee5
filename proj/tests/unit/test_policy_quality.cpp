#include <gtest/gtest.h>

#include <cmath>

#include "fsim/policy.hpp"
#include "fsim/quality.hpp"

using namespace fsim;

namespace {

DiscoveryContext ctx(double ancestor_quality, std::optional<double> oracle = std::nullopt) {
  return {page_at(0), ancestor_quality, page_at(1), oracle};
}

}  // namespace

TEST(Policy, InitialPriorities) {
  EXPECT_EQ(initial_priority(PolicyKind::Bfs, ctx(0.9)), 0.0);
  EXPECT_EQ(initial_priority(PolicyKind::QFirst, ctx(0.7)), 0.7);
  EXPECT_EQ(initial_priority(PolicyKind::QMin, ctx(0.7)), 0.7);
  EXPECT_EQ(initial_priority(PolicyKind::QOracle, ctx(0.7, 0.42)), 0.42);
}

TEST(Policy, OracleScorePresenceChecked) {
  EXPECT_THROW(initial_priority(PolicyKind::QOracle, ctx(0.7)), std::invalid_argument);
  EXPECT_THROW(initial_priority(PolicyKind::QFirst, ctx(0.7, 0.1)), std::invalid_argument);
}

TEST(Policy, OnlyQMinRevisesAndOnlyDownwards) {
  EXPECT_EQ(rediscovery_update(PolicyKind::QMin, 0.8, ctx(0.3)), 0.3);
  EXPECT_FALSE(rediscovery_update(PolicyKind::QMin, 0.3, ctx(0.8)).has_value());
  EXPECT_FALSE(rediscovery_update(PolicyKind::QMin, 0.3, ctx(0.3)).has_value());
  EXPECT_FALSE(rediscovery_update(PolicyKind::QFirst, 0.2, ctx(0.9)).has_value());
  EXPECT_FALSE(rediscovery_update(PolicyKind::QFirst, 0.9, ctx(0.2)).has_value());
  EXPECT_FALSE(rediscovery_update(PolicyKind::Bfs, 0.0, ctx(0.2)).has_value());
  EXPECT_FALSE(rediscovery_update(PolicyKind::QOracle, 0.5, ctx(0.1, 0.5)).has_value());
}

TEST(Policy, QMinSequenceIsNonIncreasing) {
  double current = initial_priority(PolicyKind::QMin, ctx(0.6));
  for (double q : {0.9, 0.4, 0.5, 0.4, 0.1, 0.7, 0.05}) {
    const auto next = rediscovery_update(PolicyKind::QMin, current, ctx(q));
    if (next) {
      EXPECT_LT(*next, current);
      current = *next;
    }
  }
  EXPECT_EQ(current, 0.05);
}

TEST(Policy, NamesRoundTrip) {
  for (PolicyKind k : kAllPolicies) EXPECT_EQ(parse_policy(to_string(k)), k);
  EXPECT_EQ(parse_policy("QMin"), PolicyKind::QMin);
  EXPECT_THROW(parse_policy("qmax"), ValidationError);
}

TEST(Quality, LookupAndDefault) {
  const QualityTable t({0.9, 0.0}, 0.0);
  EXPECT_EQ(t.score(page_at(0)), 0.9);
  EXPECT_EQ(t.score(page_at(1)), 0.0);
  EXPECT_EQ(t.score(page_at(0)), t.score(page_at(0)));
  EXPECT_THROW(t.score(page_at(2)), std::out_of_range);
}

TEST(Quality, NonFiniteScoresRejected) {
  EXPECT_THROW(QualityTable({std::nan("")}, 0.0), std::invalid_argument);
  EXPECT_THROW(QualityTable({0.1}, INFINITY), std::invalid_argument);
}

TEST(Quality, TransformAppliesToEveryScore) {
  const QualityTable t({0.1, 0.4}, 0.0);
  const auto u = t.transformed([](double s) { return 2 * s + 1; });
  EXPECT_DOUBLE_EQ(u.score(page_at(1)), 1.8);
  EXPECT_DOUBLE_EQ(u.default_score(), 1.0);
}

TEST(SyntheticScore, ZeroNoiseIsExact) {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) EXPECT_EQ(synthetic_score(page_at(7), 0.5, 0.0, seed), 0.5);
}

TEST(SyntheticScore, DeterministicPerPageAndSeed) {
  EXPECT_EQ(synthetic_score(page_at(3), 0.5, 0.1, 42), synthetic_score(page_at(3), 0.5, 0.1, 42));
  EXPECT_NE(synthetic_score(page_at(3), 0.5, 0.1, 42), synthetic_score(page_at(4), 0.5, 0.1, 42));
  EXPECT_NE(synthetic_score(page_at(3), 0.5, 0.1, 42), synthetic_score(page_at(3), 0.5, 0.1, 43));
  EXPECT_THROW(synthetic_score(page_at(3), 0.5, -0.1, 42), std::invalid_argument);
}

TEST(SyntheticScore, EmpiricalMeanAndSpread) {
  constexpr std::size_t n = 10'000;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = synthetic_score(page_at(i), 0.5, 0.1, 7);
    sum += s;
    sum_sq += s * s;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum_sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.5, 0.01);
  EXPECT_NEAR(sd, 0.1, 0.005);
}
