#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace egbm {

// Minimizes (1/2N) |yc - Xc v|^2 + lambda |v|_1 where Xc, yc are the
// column-centered design and centered targets. The intercept is not
// penalized.
struct LassoProblem {
  Eigen::MatrixXd design;  // N x m
  Eigen::VectorXd targets; // N
  double lambda = 0.0;
};

struct LassoSolution {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double lambda_used = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct LassoOptions {
  double tol = 1e-9;
  int max_iter = 10000;
};

inline double soft_threshold(double z, double lambda) {
  if (z > lambda) return z - lambda;
  if (z < -lambda) return z + lambda;
  return 0.0;
}

// Cyclic coordinate descent on the centered Gram matrix. Zero-variance
// columns keep a zero weight. Throws DataError on non-finite input.
LassoSolution lasso_fit(const LassoProblem& problem, double tol, int max_iter);

// Same solver starting from `warm_start` weights. `objective_trace`, when
// non-null, receives the objective after every sweep.
LassoSolution lasso_fit(const LassoProblem& problem, const LassoOptions& options,
                        const Eigen::VectorXd* warm_start,
                        std::vector<double>* objective_trace = nullptr);

// Smallest lambda with an all-zero solution: max_j |<xc_j, yc>| / N.
double lambda_max(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets);

// Lasso objective value for weights v (intercept profiled out by centering).
double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                       const Eigen::VectorXd& weights, double lambda);

// `count` log-spaced values from lambda_max down to ratio * lambda_max.
std::vector<double> lambda_grid(double lambda_max, int count, double ratio = 1e-3);

// Fold index (0..folds-1) for every row: a seeded shuffle cut into
// contiguous blocks.
std::vector<int> fold_assignment(Eigen::Index rows, int folds, std::uint64_t seed);

struct LassoCvResult {
  LassoSolution solution;       // refit on all rows at the selected lambda
  std::vector<double> cv_error; // mean held-out squared error per grid entry
  std::size_t selected = 0;
};

// K-fold cross validation over `grid` (positive, descending); ties go to
// the larger lambda. Throws ConfigError when folds is outside [2, N] or the
// grid is invalid.
LassoCvResult lasso_cv_full(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                            const std::vector<int>& folds_of_row, int folds,
                            const std::vector<double>& grid, const LassoOptions& options = {});

LassoSolution lasso_cv(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets, int folds,
                       const std::vector<double>& grid, std::uint64_t seed,
                       const LassoOptions& options = {});

}  // namespace egbm
