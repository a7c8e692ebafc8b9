#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "egbm/dataset.hpp"
#include "egbm/trainer.hpp"

namespace egbm {

// Which dispersion multiplies |w_k|.
enum class ImportanceScale {
  kShapeValues,    // std of g_k(x_ik) over the data
  kFeatureValues,  // std of x_ik over the data
};

struct ImportanceReport {
  Eigen::VectorXd importance;
  Eigen::VectorXd raw_weight;
  std::vector<std::size_t> ranking;  // feature indices, most important first
};

ImportanceReport feature_importances(const EGBMModel& model, const Dataset& dataset,
                                     ImportanceScale scale = ImportanceScale::kShapeValues);
ImportanceReport feature_importances(const EGBMModel& model, const Eigen::MatrixXd& features,
                                     ImportanceScale scale = ImportanceScale::kShapeValues);

struct ShapeTable {
  std::size_t feature = 0;
  Eigen::VectorXd grid;          // ascending, spans the feature's range
  Eigen::VectorXd contribution;  // w_k (g_k(x) - mean_i g_k(x_ik)), optionally scaled
  bool scaled = false;
  bool constant = false;  // shape does not vary over the grid
};

// Throws ConfigError for a bad feature index or grid_size < 2.
ShapeTable export_shape(const EGBMModel& model, const Eigen::MatrixXd& features, std::size_t feature,
                        int grid_size, bool scaled);

struct ConvergenceDiagnostic {
  int window = 0;
  double threshold = 0.0;
  double relative_drift = 0.0;
  bool stabilized = true;
};

int default_convergence_window(int iterations);
// Features whose mean |w_k| over the window is at most this fraction of the
// largest one are left out of the drift.
inline constexpr double kNegligibleWeightRatio = 1e-3;
inline constexpr double kDefaultConvergenceThreshold = 0.05;

// Over the trailing `window` rows, for each feature: std of w_k divided by
// mean |w_k|; the maximum over features is the drift. Throws ConfigError
// when window exceeds the history length or threshold <= 0.
ConvergenceDiagnostic convergence_check(const TrainingHistory& history, int window, double threshold);

// Coefficient of determination of `predicted` against `observed`.
double r_squared(const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted);

// Spearman rank correlation with average ranks for ties.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace egbm
