#include <gtest/gtest.h>

#include <random>

#include "misflow/error.hpp"
#include "misflow/simplex.hpp"
#include "oracle/rational_lp.hpp"

using namespace misflow;
using lp::Sense;

namespace {

lp::Row row(std::vector<std::pair<int, double>> terms, Sense s, double rhs) {
  lp::Row r;
  r.terms = std::move(terms);
  r.sense = s;
  r.rhs = rhs;
  return r;
}

}  // namespace

TEST(Simplex, SmallMaximization) {
  // max 3x + 5y st x <= 4, 2y <= 12, 3x + 2y <= 18  -> 36 at (2, 6)
  lp::LinearProgram p;
  const int x = p.add_variable("x", -3);
  const int y = p.add_variable("y", -5);
  p.add_row(row({{x, 1}}, Sense::LessEqual, 4));
  p.add_row(row({{y, 2}}, Sense::LessEqual, 12));
  p.add_row(row({{x, 3}, {y, 2}}, Sense::LessEqual, 18));
  const lp::Solution s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.objective, -36.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
  EXPECT_NEAR(s.x[1], 6.0, 1e-9);
  EXPECT_GE(s.min_reduced_cost, -1e-7);
}

TEST(Simplex, EqualityAndGreaterRows) {
  // min x + 2y st x + y = 10, x >= 3, y >= 2 -> 12 at (8, 2)
  lp::LinearProgram p;
  const int x = p.add_variable("x", 1);
  const int y = p.add_variable("y", 2);
  p.add_row(row({{x, 1}, {y, 1}}, Sense::Equal, 10));
  p.add_row(row({{x, 1}}, Sense::GreaterEqual, 3));
  p.add_row(row({{y, 1}}, Sense::GreaterEqual, 2));
  const lp::Solution s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.objective, 12.0, 1e-9);
  EXPECT_LE(p.max_residual(s.x), 1e-9);
}

TEST(Simplex, NegativeRhsNormalized) {
  // -x <= -5  (x >= 5), min x
  lp::LinearProgram p;
  const int x = p.add_variable("x", 1);
  p.add_row(row({{x, -1}}, Sense::LessEqual, -5));
  const lp::Solution s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_NEAR(s.x[0], 5.0, 1e-9);
}

TEST(Simplex, Infeasible) {
  lp::LinearProgram p;
  const int x = p.add_variable("x", 1);
  p.add_row(row({{x, 1}}, Sense::LessEqual, 1));
  p.add_row(row({{x, 1}}, Sense::GreaterEqual, 2));
  EXPECT_EQ(lp::solve(p).status, lp::Status::Infeasible);
}

TEST(Simplex, Unbounded) {
  lp::LinearProgram p;
  const int x = p.add_variable("x", -1);
  const int y = p.add_variable("y", 0);
  p.add_row(row({{x, 1}, {y, -1}}, Sense::LessEqual, 1));
  EXPECT_EQ(lp::solve(p).status, lp::Status::Unbounded);
}

TEST(Simplex, EmptyProgram) {
  lp::LinearProgram p;
  p.add_variable("x", 2);
  const lp::Solution s = lp::solve(p);
  ASSERT_EQ(s.status, lp::Status::Optimal);
  EXPECT_DOUBLE_EQ(s.objective, 0.0);
}

TEST(Simplex, BealeCyclingExampleTerminates) {
  lp::LinearProgram p;
  const int x4 = p.add_variable("x4", -0.75);
  const int x5 = p.add_variable("x5", 20);
  const int x6 = p.add_variable("x6", -0.5);
  const int x7 = p.add_variable("x7", 6);
  p.add_row(row({{x4, 0.25}, {x5, -8}, {x6, -1}, {x7, 9}}, Sense::LessEqual, 0));
  p.add_row(row({{x4, 0.5}, {x5, -12}, {x6, -0.5}, {x7, 3}}, Sense::LessEqual, 0));
  p.add_row(row({{x6, 1}}, Sense::LessEqual, 1));
  for (bool bland : {false, true}) {
    lp::SolveOptions opt;
    opt.bland_only = bland;
    opt.stall_limit = 2;
    const lp::Solution s = lp::solve(p, opt);
    ASSERT_EQ(s.status, lp::Status::Optimal);
    EXPECT_NEAR(s.objective, -1.25, 1e-9);
  }
}

TEST(Simplex, IterationLimitThrows) {
  lp::LinearProgram p;
  std::vector<std::pair<int, double>> terms;
  for (int i = 0; i < 10; ++i) terms.push_back({p.add_variable("x" + std::to_string(i), -1.0 - i), 1.0});
  for (int i = 0; i < 10; ++i) p.add_row(row({{i, 1}}, Sense::LessEqual, 1));
  lp::SolveOptions opt;
  opt.max_iterations = 1;
  EXPECT_THROW(lp::solve(p, opt), SolverError);
}

TEST(Simplex, AgreesWithRationalOracleProperty) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<int> coef(-5, 9);
  std::uniform_int_distribution<int> rhs(0, 20);
  std::uniform_int_distribution<int> sense(0, 5);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 2 + trial % 5;
    const int m = 1 + trial % 4;
    lp::LinearProgram p;
    oracle::RationalLp q;
    for (int j = 0; j < n; ++j) {
      const int c = coef(rng);
      p.add_variable("x" + std::to_string(j), c);
      q.add_var(c);
    }
    for (int i = 0; i < m; ++i) {
      const int s = sense(rng);
      const Sense sn = s < 4 ? Sense::LessEqual : s == 4 ? Sense::Equal : Sense::GreaterEqual;
      const int b = rhs(rng) - (s == 5 ? 0 : 3);
      lp::Row r;
      r.sense = sn;
      r.rhs = b;
      const std::size_t qi = q.add_row(sn == Sense::LessEqual ? '<' : sn == Sense::Equal ? '=' : '>', b);
      for (int j = 0; j < n; ++j) {
        const int a = coef(rng) / 2;
        if (a == 0) continue;
        r.terms.push_back({j, a});
        q.rows[qi][static_cast<std::size_t>(j)] = a;
      }
      p.add_row(r);
    }
    // Box every variable half the time so most instances are bounded.
    if (trial % 2 == 0) {
      for (int j = 0; j < n; ++j) {
        p.add_row(row({{j, 1}}, Sense::LessEqual, 10));
        const std::size_t qi = q.add_row('<', 10);
        q.rows[qi][static_cast<std::size_t>(j)] = 1;
      }
    }
    const oracle::RationalResult exact = oracle::solve_exact(q);
    const lp::Solution s = lp::solve(p);
    if (!exact.feasible) {
      EXPECT_EQ(s.status, lp::Status::Infeasible) << "trial " << trial;
      ++infeasible;
    } else if (!exact.bounded) {
      EXPECT_EQ(s.status, lp::Status::Unbounded) << "trial " << trial;
      ++unbounded;
    } else {
      ASSERT_EQ(s.status, lp::Status::Optimal) << "trial " << trial;
      EXPECT_NEAR(s.objective, oracle::to_double(exact.objective), 1e-7) << "trial " << trial;
      EXPECT_LE(p.max_residual(s.x), 1e-7);
      ++optimal;
    }
  }
  EXPECT_GT(optimal, 30);
  EXPECT_GT(infeasible + unbounded, 5);
}
