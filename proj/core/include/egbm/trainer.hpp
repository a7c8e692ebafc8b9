#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "egbm/dataset.hpp"
#include "egbm/feature_gbm.hpp"

namespace egbm {

enum class Task { kRegression, kClassification };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

struct LassoMode {
  bool cross_validate = true;
  int folds = 5;
  int grid_size = 20;
  double grid_ratio = 1e-3;
  double lambda = 0.0;  // used when cross_validate is false
};

// Where the Lasso step takes its regression targets from.
enum class LassoTarget {
  kTargets,            // standardized y (regression) or 0/1 labels
  kPreviousResiduals,  // r^(s-1), the literal reading of the loop
};

struct TrainConfig {
  int iterations = 100;
  double alpha = 0.3;
  double learning_rate = 0.1;
  int inner_steps = 1;
  LassoMode lasso;
  Task task = Task::kRegression;
  int pretrain_steps = 10;
  std::uint64_t seed = 0;
  int threads = 1;
  // Optional RNG stream id per feature column; defaults to the column index.
  std::vector<std::uint64_t> feature_stream_ids;

  // Variants of the loop kept for comparison with the literal algorithm.
  bool zero_initial_residuals = false;  // r^(0) = 0 instead of the targets
  bool double_weight_targets = false;   // GBM targets r * w_k * w_k
  LassoTarget lasso_target = LassoTarget::kTargets;

  // Throws ConfigError for out-of-range values.
  void validate() const;
};

struct EGBMModel {
  std::vector<FeatureGBM> gbms;
  Eigen::VectorXd weights;
  double intercept = 0.0;
  StandardizationStats target_stats;  // identity for classification
  std::vector<std::string> feature_names;
  Task task = Task::kRegression;
  double learning_rate = 0.1;

  [[nodiscard]] Eigen::Index feature_count() const { return static_cast<Eigen::Index>(gbms.size()); }
};

// Rows are iterations 1..T.
struct TrainingHistory {
  Eigen::MatrixXd weight_trajectory;  // w^(s)
  Eigen::MatrixXd lasso_weights;      // v^(s)
  Eigen::VectorXd training_loss;      // mean loss on the training targets
  std::vector<double> lambda_used;
};

// Negative gradient of 1/2 (y - z)^2.
Eigen::VectorXd compute_residuals_l2(const Eigen::VectorXd& y, const Eigen::VectorXd& prediction);

double sigmoid(double z);

// Negative gradient of binary cross-entropy with respect to the score.
// Throws DataError unless every label is 0 or 1.
Eigen::VectorXd compute_residuals_logistic(const Eigen::VectorXd& labels, const Eigen::VectorXd& score);

inline Eigen::VectorXd per_feature_targets(const Eigen::VectorXd& residuals, double weight) {
  return residuals * weight;
}

// (1 - alpha) w_prev + alpha v. Throws ConfigError unless alpha is in (0, 1].
Eigen::VectorXd update_weights(const Eigen::VectorXd& w_prev, const Eigen::VectorXd& v, double alpha);

// Maps {0,1} or {-1,+1} labels to {0,1}. Throws DataError for anything else.
Eigen::VectorXd binary_labels(const Eigen::VectorXd& targets);

struct TrainResult {
  EGBMModel model;
  TrainingHistory history;
};

TrainResult train(const Dataset& dataset, const TrainConfig& config);

// Shape-function matrix: column k is g_k evaluated on column k of `features`.
Eigen::MatrixXd shape_matrix(const EGBMModel& model, const Eigen::MatrixXd& features);

// intercept + sum_k w_k g_k(x_k), before destandardization or the link.
Eigen::VectorXd model_score(const EGBMModel& model, const Eigen::MatrixXd& features);

// Rewrites a model trained on standardize_columns(x, stats) so that it
// accepts raw x: every threshold t becomes mean + std * t.
EGBMModel unstandardize_inputs(EGBMModel model, const ColumnStats& stats);

// Destandardized regression output, or class-1 probability.
Eigen::VectorXd model_predict(const EGBMModel& model, const Eigen::MatrixXd& features);

}  // namespace egbm
