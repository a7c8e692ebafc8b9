#include "egbm/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "egbm/error.hpp"

namespace egbm {

ImportanceReport feature_importances(const EGBMModel& model, const Eigen::MatrixXd& features, ImportanceScale scale) {
  if (features.cols() != model.feature_count()) throw DataError("importance: feature count does not match the model");
  const Eigen::Index m = model.feature_count();
  ImportanceReport report;
  report.raw_weight = model.weights;
  report.importance.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double w = std::abs(model.weights(k));
    if (w == 0.0) {
      report.importance(k) = 0.0;
      continue;
    }
    const double spread = scale == ImportanceScale::kShapeValues
                              ? population_std(model.gbms[k].predict(features.col(k)))
                              : population_std(features.col(k));
    report.importance(k) = w * spread;
  }
  report.ranking.resize(m);
  std::iota(report.ranking.begin(), report.ranking.end(), std::size_t{0});
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return report.importance(a) > report.importance(b); });
  return report;
}

ImportanceReport feature_importances(const EGBMModel& model, const Dataset& dataset, ImportanceScale scale) {
  if (dataset.feature_names != model.feature_names) throw DataError("importance: dataset schema does not match the model");
  return feature_importances(model, dataset.features, scale);
}

ShapeTable export_shape(const EGBMModel& model, const Eigen::MatrixXd& features, std::size_t feature, int grid_size,
                        bool scaled) {
  if (feature >= static_cast<std::size_t>(model.feature_count())) {
    throw ConfigError("feature index " + std::to_string(feature) + " out of range");
  }
  if (grid_size < 2) throw ConfigError("shape grid needs at least 2 points");
  if (features.cols() != model.feature_count()) throw DataError("shape export: feature count does not match the model");
  const auto k = static_cast<Eigen::Index>(feature);
  const FeatureGBM& gbm = model.gbms[feature];
  const double lo = features.col(k).minCoeff();
  const double hi = features.col(k).maxCoeff();
  const double center = mean_of(gbm.predict(features.col(k)));

  ShapeTable table;
  table.feature = feature;
  table.scaled = scaled;
  table.grid = Eigen::VectorXd::LinSpaced(grid_size, lo, hi);
  table.grid(grid_size - 1) = hi;
  table.contribution = model.weights(k) * (gbm.predict(table.grid).array() - center);
  const double cmin = table.contribution.minCoeff();
  const double cmax = table.contribution.maxCoeff();
  table.constant = !(cmax > cmin);
  if (table.constant) {
    table.contribution.setZero();
  } else if (scaled) {
    table.contribution = (table.contribution.array() - cmin) / (cmax - cmin);
    for (Eigen::Index i = 0; i < table.contribution.size(); ++i) {
      table.contribution(i) = std::clamp(table.contribution(i), 0.0, 1.0);
    }
  }
  return table;
}

int default_convergence_window(int iterations) { return std::max(10, iterations / 5); }

ConvergenceDiagnostic convergence_check(const TrainingHistory& history, int window, double threshold) {
  const auto rows = static_cast<int>(history.weight_trajectory.rows());
  if (window < 1 || window > rows) {
    throw ConfigError("convergence window " + std::to_string(window) + " exceeds history length " +
                      std::to_string(rows));
  }
  if (!(threshold > 0.0)) throw ConfigError("convergence threshold must be > 0");
  ConvergenceDiagnostic diag;
  diag.window = window;
  diag.threshold = threshold;
  const auto tail = history.weight_trajectory.bottomRows(window);
  const Eigen::VectorXd scale = tail.cwiseAbs().colwise().mean().transpose();
  const double largest = scale.size() > 0 ? scale.maxCoeff() : 0.0;
  for (Eigen::Index k = 0; k < tail.cols(); ++k) {
    // Weights that are zero in effect carry no drift information.
    if (scale(k) <= kNegligibleWeightRatio * largest) continue;
    diag.relative_drift = std::max(diag.relative_drift, population_std(tail.col(k)) / scale(k));
  }
  diag.stabilized = diag.relative_drift < threshold;
  return diag;
}

double r_squared(const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted) {
  if (observed.size() != predicted.size()) throw DataError("r_squared: length mismatch");
  const double mu = observed.mean();
  const double total = (observed.array() - mu).square().sum();
  const double residual = (observed - predicted).squaredNorm();
  if (total == 0.0) return residual == 0.0 ? 1.0 : 0.0;
  return 1.0 - residual / total;
}

namespace {

Eigen::VectorXd average_ranks(const Eigen::VectorXd& v) {
  std::vector<Eigen::Index> order(v.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return v(a) < v(b); });
  Eigen::VectorXd ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v(order[j + 1]) == v(order[i])) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks(order[t]) = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 2) throw DataError("spearman: need two vectors of equal length >= 2");
  const Eigen::VectorXd ra = average_ranks(a).array() - (static_cast<double>(a.size()) + 1.0) / 2.0;
  const Eigen::VectorXd rb = average_ranks(b).array() - (static_cast<double>(b.size()) + 1.0) / 2.0;
  const double denom = std::sqrt(ra.squaredNorm() * rb.squaredNorm());
  return denom == 0.0 ? 0.0 : ra.dot(rb) / denom;
}

}  // namespace egbm
