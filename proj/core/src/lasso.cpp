#include "egbm/lasso.hpp"

#include <cmath>
#include <numeric>

#include "egbm/error.hpp"
#include "egbm/rng.hpp"

namespace egbm {

namespace {

// Centered sufficient statistics of a least-squares problem.
struct Moments {
  Eigen::VectorXd column_mean;
  double target_mean = 0.0;
  Eigen::MatrixXd gram;       // Xc' Xc / N
  Eigen::VectorXd cross;      // Xc' yc / N
  double target_energy = 0.0; // yc' yc / N
  std::vector<bool> constant;
};

bool is_constant(const Eigen::Ref<const Eigen::VectorXd>& column) {
  return column.size() == 0 || (column.array() == column(0)).all();
}

Moments moments(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
  const auto n = static_cast<double>(design.rows());
  Moments m;
  m.column_mean = design.colwise().mean().transpose();
  m.target_mean = targets.mean();
  const Eigen::MatrixXd xc = design.rowwise() - m.column_mean.transpose();
  const Eigen::VectorXd yc = targets.array() - m.target_mean;
  m.gram = xc.transpose() * xc / n;
  m.cross = xc.transpose() * yc / n;
  m.target_energy = yc.squaredNorm() / n;
  m.constant.resize(design.cols());
  for (Eigen::Index j = 0; j < design.cols(); ++j) m.constant[j] = is_constant(design.col(j));
  return m;
}

double objective_from_moments(const Moments& m, const Eigen::VectorXd& v, double lambda) {
  return 0.5 * m.target_energy - m.cross.dot(v) + 0.5 * v.dot(m.gram * v) + lambda * v.lpNorm<1>();
}

LassoSolution solve(const Moments& m, double lambda, const LassoOptions& options, const Eigen::VectorXd* warm_start,
                    std::vector<double>* trace) {
  const Eigen::Index p = m.gram.rows();
  LassoSolution sol;
  sol.lambda_used = lambda;
  sol.weights = Eigen::VectorXd::Zero(p);
  if (warm_start != nullptr && warm_start->size() == p) sol.weights = *warm_start;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (m.constant[j]) sol.weights(j) = 0.0;
  }
  Eigen::VectorXd gram_w = m.gram * sol.weights;

  for (int sweep = 1; sweep <= options.max_iter; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (m.constant[j]) continue;
      const double diag = m.gram(j, j);
      const double old = sol.weights(j);
      const double z = m.cross(j) - (gram_w(j) - diag * old);
      const double updated = soft_threshold(z, lambda) / diag;
      const double delta = updated - old;
      if (delta != 0.0) {
        sol.weights(j) = updated;
        gram_w += m.gram.col(j) * delta;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    sol.iterations = sweep;
    if (trace != nullptr) trace->push_back(objective_from_moments(m, sol.weights, lambda));
    if (max_change < options.tol) {
      sol.converged = true;
      break;
    }
  }
  sol.intercept = m.target_mean - m.column_mean.dot(sol.weights);
  return sol;
}

void check_problem(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
  if (design.rows() != targets.size()) throw DataError("lasso: design rows do not match target length");
  if (design.rows() < 2) throw DataError("lasso: need at least 2 rows");
  if (design.cols() < 1) throw DataError("lasso: need at least 1 column");
  if (!design.allFinite() || !targets.allFinite()) throw DataError("lasso: non-finite input");
}

}  // namespace

LassoSolution lasso_fit(const LassoProblem& problem, const LassoOptions& options, const Eigen::VectorXd* warm_start,
                        std::vector<double>* objective_trace) {
  check_problem(problem.design, problem.targets);
  if (!(problem.lambda >= 0.0) || !std::isfinite(problem.lambda)) throw ConfigError("lasso: lambda must be >= 0");
  if (options.max_iter < 1) throw ConfigError("lasso: max_iter must be >= 1");
  return solve(moments(problem.design, problem.targets), problem.lambda, options, warm_start, objective_trace);
}

LassoSolution lasso_fit(const LassoProblem& problem, double tol, int max_iter) {
  return lasso_fit(problem, LassoOptions{tol, max_iter}, nullptr);
}

double lambda_max(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets) {
  check_problem(design, targets);
  const Moments m = moments(design, targets);
  double best = 0.0;
  for (Eigen::Index j = 0; j < design.cols(); ++j) {
    if (!m.constant[j]) best = std::max(best, std::abs(m.cross(j)));
  }
  return best;
}

double lasso_objective(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets, const Eigen::VectorXd& weights,
                       double lambda) {
  const Eigen::MatrixXd xc = design.rowwise() - design.colwise().mean();
  const Eigen::VectorXd yc = targets.array() - targets.mean();
  const double n = static_cast<double>(design.rows());
  return 0.5 * (yc - xc * weights).squaredNorm() / n + lambda * weights.lpNorm<1>();
}

std::vector<double> lambda_grid(double lambda_max, int count, double ratio) {
  if (count < 1) throw ConfigError("lambda grid needs at least one value");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ConfigError("lambda grid ratio must be in (0, 1]");
  std::vector<double> grid(count);
  if (count == 1) {
    grid[0] = lambda_max;
    return grid;
  }
  const double log_hi = std::log(lambda_max);
  const double step = std::log(ratio) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) grid[i] = std::exp(log_hi + step * i);
  grid.front() = lambda_max;
  return grid;
}

std::vector<int> fold_assignment(Eigen::Index rows, int folds, std::uint64_t seed) {
  if (folds < 2 || folds > rows) {
    throw ConfigError("cross validation needs 2 <= folds <= N (folds=" + std::to_string(folds) +
                      ", N=" + std::to_string(rows) + ")");
  }
  std::vector<Eigen::Index> order(rows);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Rng rng(seed, StreamPurpose::kFolds);
  for (Eigen::Index i = rows - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<int> fold_of(rows);
  for (Eigen::Index pos = 0; pos < rows; ++pos) {
    fold_of[order[pos]] = static_cast<int>(pos * folds / rows);
  }
  return fold_of;
}

LassoCvResult lasso_cv_full(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                            const std::vector<int>& folds_of_row, int folds, const std::vector<double>& grid,
                            const LassoOptions& options) {
  check_problem(design, targets);
  if (folds < 2 || folds > design.rows()) throw ConfigError("cross validation needs 2 <= folds <= N");
  if (static_cast<Eigen::Index>(folds_of_row.size()) != design.rows())
    throw ConfigError("fold assignment length does not match row count");
  if (grid.empty()) throw ConfigError("lambda grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) throw ConfigError("lambda grid values must be positive");
    if (i > 0 && grid[i] > grid[i - 1]) throw ConfigError("lambda grid must be sorted descending");
  }

  LassoCvResult result;
  result.cv_error.assign(grid.size(), 0.0);
  const Eigen::Index p = design.cols();
  for (int f = 0; f < folds; ++f) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (Eigen::Index i = 0; i < design.rows(); ++i) (folds_of_row[i] == f ? test_rows : train_rows).push_back(i);
    if (test_rows.empty() || train_rows.size() < 2) continue;
    const Eigen::MatrixXd x_train = design(train_rows, Eigen::all);
    const Eigen::VectorXd y_train = targets(train_rows);
    const Moments m = moments(x_train, y_train);
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(p);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const LassoSolution sol = solve(m, grid[g], options, &warm, nullptr);
      warm = sol.weights;
      for (const Eigen::Index i : test_rows) {
        const double err = targets(i) - (sol.intercept + design.row(i).dot(sol.weights));
        result.cv_error[g] += err * err;
      }
    }
  }
  for (double& e : result.cv_error) e /= static_cast<double>(design.rows());

  // Strict improvement is required to move to a smaller lambda.
  result.selected = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (result.cv_error[g] < result.cv_error[result.selected]) result.selected = g;
  }
  result.solution = solve(moments(design, targets), grid[result.selected], options, nullptr, nullptr);
  return result;
}

LassoSolution lasso_cv(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets, int folds,
                       const std::vector<double>& grid, std::uint64_t seed, const LassoOptions& options) {
  check_problem(design, targets);
  return lasso_cv_full(design, targets, fold_assignment(design.rows(), folds, seed), folds, grid, options).solution;
}

}  // namespace egbm
