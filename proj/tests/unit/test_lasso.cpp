#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "egbm/error.hpp"
#include "egbm/lasso.hpp"
#include "egbm/rng.hpp"

using namespace egbm;

namespace {

LassoProblem random_problem(std::uint64_t seed, Eigen::Index n = 6, Eigen::Index m = 4) {
  Rng rng(seed);
  LassoProblem p;
  p.design.resize(n, m);
  p.targets.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) p.design(i, j) = rng.normal();
    p.targets(i) = rng.normal();
  }
  return p;
}

}  // namespace

TEST(Lasso, SoftThreshold) {
  EXPECT_DOUBLE_EQ(soft_threshold(3.0, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(soft_threshold(-3.0, 1.0), -2.0);
  EXPECT_DOUBLE_EQ(soft_threshold(0.5, 1.0), 0.0);
}

TEST(Lasso, ZeroPenaltyMatchesNormalEquations) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LassoProblem p = random_problem(seed);
    const LassoSolution s = lasso_fit(p, 1e-14, 100000);
    const Eigen::MatrixXd xc = p.design.rowwise() - p.design.colwise().mean();
    const Eigen::VectorXd yc = p.targets.array() - p.targets.mean();
    const Eigen::VectorXd w = (xc.transpose() * xc).ldlt().solve(xc.transpose() * yc);
    EXPECT_LT((s.weights - w).cwiseAbs().maxCoeff(), 1e-6);
    const double b = p.targets.mean() - p.design.colwise().mean().dot(w);
    EXPECT_NEAR(s.intercept, b, 1e-6);
  }
}

TEST(Lasso, LambdaMaxZeroesEverything) {
  LassoProblem p = random_problem(3, 20, 5);
  p.lambda = lambda_max(p.design, p.targets);
  EXPECT_TRUE(lasso_fit(p, 1e-12, 1000).weights.isZero());
  p.lambda *= 0.9;
  EXPECT_FALSE(lasso_fit(p, 1e-12, 1000).weights.isZero());
}

TEST(Lasso, ConstantColumnGetsZeroWeight) {
  LassoProblem p = random_problem(4, 10, 3);
  p.design.col(1).setConstant(2.5);
  const LassoSolution s = lasso_fit(p, 1e-12, 10000);
  EXPECT_EQ(s.weights(1), 0.0);
}

TEST(Lasso, ObjectiveIsMonotoneAndKktHolds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    LassoProblem p = random_problem(100 + seed, 15, 6);
    p.lambda = 0.05 * static_cast<double>(seed % 5 + 1);
    std::vector<double> trace;
    const LassoSolution s = lasso_fit(p, {1e-13, 100000}, nullptr, &trace);
    ASSERT_TRUE(s.converged);
    for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_LE(trace[k], trace[k - 1] + 1e-14);
    const Eigen::MatrixXd xc = p.design.rowwise() - p.design.colwise().mean();
    const Eigen::VectorXd yc = p.targets.array() - p.targets.mean();
    const Eigen::VectorXd g = xc.transpose() * (yc - xc * s.weights) / static_cast<double>(p.design.rows());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      if (s.weights(j) == 0.0) {
        EXPECT_LE(std::abs(g(j)), p.lambda + 1e-7);
      } else {
        EXPECT_NEAR(g(j), p.lambda * (s.weights(j) > 0 ? 1.0 : -1.0), 1e-7);
      }
    }
  }
}

TEST(Lasso, BeatsGridSearchOnSmallProblems) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    LassoProblem p = random_problem(200 + seed, 6, 2);
    p.lambda = 0.1;
    const LassoSolution s = lasso_fit(p, 1e-14, 100000);
    const double best = lasso_objective(p.design, p.targets, s.weights, p.lambda);
    for (double a = -2.0; a <= 2.0; a += 0.02) {
      for (double b = -2.0; b <= 2.0; b += 0.02) {
        EXPECT_LE(best, lasso_objective(p.design, p.targets, Eigen::Vector2d(a, b), p.lambda) + 1e-12);
      }
    }
  }
}

TEST(Lasso, GridIsLogSpacedAndDescending) {
  const auto g = lambda_grid(2.0, 20, 1e-3);
  ASSERT_EQ(g.size(), 20u);
  EXPECT_DOUBLE_EQ(g.front(), 2.0);
  EXPECT_NEAR(g.back(), 2e-3, 1e-15);
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_NEAR(g[k] / g[k - 1], std::pow(1e-3, 1.0 / 19.0), 1e-12);
  EXPECT_THROW(lambda_grid(1.0, 0), ConfigError);
}

TEST(Lasso, FoldsAreBalancedAndSeeded) {
  const auto f = fold_assignment(103, 5, 8);
  std::vector<int> counts(5, 0);
  for (int k : f) ++counts[static_cast<std::size_t>(k)];
  for (int c : counts) EXPECT_TRUE(c == 20 || c == 21);
  EXPECT_EQ(f, fold_assignment(103, 5, 8));
  EXPECT_NE(f, fold_assignment(103, 5, 9));
}

TEST(Lasso, CrossValidationMatchesBruteForceLeaveOneOut) {
  const LassoProblem p = random_problem(42, 12, 3);
  const auto grid = lambda_grid(lambda_max(p.design, p.targets), 8, 1e-2);
  std::vector<int> loo(12);
  std::iota(loo.begin(), loo.end(), 0);
  const LassoCvResult cv = lasso_cv_full(p.design, p.targets, loo, 12, grid, {1e-14, 100000});
  ASSERT_EQ(cv.cv_error.size(), grid.size());
  std::vector<double> brute(grid.size(), 0.0);
  for (Eigen::Index out = 0; out < 12; ++out) {
    LassoProblem train;
    train.design.resize(11, 3);
    train.targets.resize(11);
    for (Eigen::Index i = 0, r = 0; i < 12; ++i) {
      if (i == out) continue;
      train.design.row(r) = p.design.row(i);
      train.targets(r++) = p.targets(i);
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
      train.lambda = grid[g];
      const LassoSolution s = lasso_fit(train, 1e-14, 100000);
      const double e = p.targets(out) - s.intercept - p.design.row(out).dot(s.weights);
      brute[g] += e * e / 12.0;
    }
  }
  for (std::size_t g = 0; g < grid.size(); ++g) EXPECT_NEAR(cv.cv_error[g], brute[g], 1e-8);
  const auto best = std::min_element(brute.begin(), brute.end()) - brute.begin();
  EXPECT_EQ(cv.selected, static_cast<std::size_t>(best));
  EXPECT_DOUBLE_EQ(cv.solution.lambda_used, grid[cv.selected]);
}

TEST(Lasso, TiesPreferTheLargerPenalty) {
  // Constant target: every lambda predicts the mean, so all CV errors tie.
  Rng rng(1);
  Eigen::MatrixXd x(10, 2);
  for (Eigen::Index i = 0; i < 10; ++i) x.row(i) << rng.normal(), rng.normal();
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(10, 1.5);
  const LassoCvResult cv = lasso_cv_full(x, y, fold_assignment(10, 5, 0), 5, {1.0, 0.5, 0.1});
  EXPECT_EQ(cv.selected, 0u);
}
