#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixture.hpp"
#include "misflow/error.hpp"
#include "misflow/reliability.hpp"

using namespace misflow;

namespace {

MonitoringAssignment fixture_assignment(double tr1, double tr2) {
  const CommunityGraph g = fixture::graph();
  MonitoringAssignment a;
  a.subnetworks = partition_subnetworks(spread_rates(g), 2, 0.55);
  a.chosen_tr = {tr1, tr2};
  return a;
}

}  // namespace

TEST(ArcReliability, PublishedResponseTimes) {
  const MonitoringAssignment a = fixture_assignment(7.699, 0.618);
  EXPECT_NEAR(arc_reliability({1, 1, 2, 87}, a), 68.0, 0.1);
  EXPECT_NEAR(arc_reliability({2, 3, 6, 43}, a), 97.4, 0.1);
  EXPECT_NEAR(arc_reliability({3, 1, 3, 114}, a), 65.3, 0.1);
}

TEST(ArcReliability, Symmetric) {
  const MonitoringAssignment a = fixture_assignment(3.0, 5.0);
  EXPECT_DOUBLE_EQ(arc_reliability({1, 1, 3, 1}, a), arc_reliability({1, 3, 1, 1}, a));
  EXPECT_DOUBLE_EQ(arc_reliability({1, 1, 3, 1}, a), (1.0 - 8.0 / 24.0) * 100.0);
}

TEST(ArcReliability, ClampedToZero) {
  const MonitoringAssignment a = fixture_assignment(20.0, 10.0);
  EXPECT_DOUBLE_EQ(arc_reliability({1, 1, 3, 1}, a), 0.0);
  EXPECT_NEAR(arc_reliability({1, 1, 2, 1}, a), 100.0 / 6.0, 1e-12);
}

TEST(ArcReliability, WindowScales) {
  const MonitoringAssignment a = fixture_assignment(6.0, 1.0);
  EXPECT_DOUBLE_EQ(arc_reliability({1, 1, 2, 1}, a, 12.0), 50.0);
  EXPECT_THROW(arc_reliability({1, 1, 2, 1}, a, 0.0), ArgumentError);
}

TEST(ArcReliability, UnstableSubnetworkIsInfeasible) {
  MonitoringAssignment a = fixture_assignment(1.0, 1.0);
  a.chosen_tr[0].reset();
  EXPECT_THROW(arc_reliability({1, 1, 2, 1}, a), InfeasibleError);
  EXPECT_THROW(arc_reliability({1, 1, 3, 1}, a), InfeasibleError);
  EXPECT_NO_THROW(arc_reliability({1, 3, 6, 1}, a));
}

TEST(ArcReliability, UnassignedEndpoint) {
  MonitoringAssignment a = fixture_assignment(1.0, 1.0);
  EXPECT_THROW(arc_reliability({1, 1, 9, 1}, a), ArgumentError);
}

TEST(EffectiveCapacity, RoundHalfUp) {
  EXPECT_EQ(effective_capacity(68.0, 11), 7);   // 7.48
  EXPECT_EQ(effective_capacity(65.3, 13), 8);   // 8.489
  EXPECT_EQ(effective_capacity(50.0, 1), 1);    // 0.5
  EXPECT_EQ(effective_capacity(65.0, 10), 7);   // 6.5
  EXPECT_EQ(effective_capacity(0.0, 100), 0);
  EXPECT_EQ(effective_capacity(100.0, 191), 191);
}

TEST(EffectiveCapacity, BoundedByOldProperty) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> pct(0.0, 100.0);
  std::uniform_int_distribution<int> x(0, 1000);
  for (int i = 0; i < 10000; ++i) {
    const double p = pct(rng);
    const std::int64_t old = x(rng);
    const std::int64_t out = effective_capacity(p, old);
    EXPECT_GE(out, 0);
    EXPECT_LE(out, old);
    EXPECT_LE(std::abs(static_cast<double>(out) - p / 100.0 * static_cast<double>(old)), 0.5 + 1e-9);
  }
}

TEST(EffectiveCapacities, FixtureAgainstPublishedColumn) {
  const CommunityGraph g = fixture::graph();
  const ReliabilityTable t = reliability_table(g, fixture_assignment(7.699, 0.618));
  ASSERT_EQ(t.rows.size(), 15u);
  int matches = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    EXPECT_EQ(row.x_new, effective_capacity(row.reliability_pct, row.x_old));
    if (row.x_new == fixture::kPublishedXNew[i]) ++matches;
  }
  EXPECT_EQ(matches, 13);
  EXPECT_EQ(t.rows[1].x_new, 7);
  EXPECT_EQ(t.rows[13].x_new, 8);
}

TEST(EffectiveCapacities, RejectsBadInput) {
  const CommunityGraph g = fixture::graph();
  EXPECT_THROW(effective_capacities(g, std::vector<double>(3, 50.0)), ArgumentError);
  std::vector<double> pct(15, 50.0);
  pct[4] = 101.0;
  EXPECT_THROW(effective_capacities(g, pct), ArgumentError);
}
