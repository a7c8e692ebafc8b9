#pragma once

#include <cstdint>
#include <tuple>
#include <variant>

#include <Eigen/Dense>

#include "egbm/blackbox.hpp"
#include "egbm/dataset.hpp"
#include "egbm/explain.hpp"
#include "egbm/trainer.hpp"

namespace egbm {

struct GaussianPerturbation {
  Eigen::VectorXd sigma;  // one per feature; size 1 broadcasts
};

struct UniformBoxPerturbation {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct PerturbationSpec {
  std::variant<GaussianPerturbation, UniformBoxPerturbation> kind;
  Eigen::Index count = 1000;
  std::uint64_t seed = 0;
};

// count - 1 rows from Normal(x_j, sigma_j) followed by x itself. Throws
// ConfigError for non-positive sigma or count < 2.
Eigen::MatrixXd perturb_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& sigma,
                                 Eigen::Index count, std::uint64_t seed);

// count - 1 uniform rows in the box, then x. Bounds are swapped per
// coordinate when lower > upper.
Eigen::MatrixXd perturb_uniform_box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                    Eigen::Index count, const Eigen::VectorXd& x, std::uint64_t seed);

Eigen::MatrixXd perturb(const Eigen::VectorXd& x, const PerturbationSpec& spec);

struct MidpointPoi {
  Eigen::VectorXd x;
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
};

// Two distinct rows drawn without replacement and their midpoint.
MidpointPoi midpoint_poi(const Dataset& dataset, std::uint64_t seed);

struct LocalExplanation {
  Eigen::VectorXd point;
  Eigen::MatrixXd raw_points;   // perturbed rows as sent to the black box
  Eigen::MatrixXd perturbed;    // training rows, in the surrogate's input space
  Eigen::VectorXd responses;    // black-box outputs
  EGBMModel surrogate;
  TrainingHistory history;
  ImportanceReport importance;
  double fidelity = 0.0;
  bool standardized_features = false;
  ColumnStats feature_stats;  // used when standardized_features
};

struct LocalOptions {
  bool standardize_features = true;
  std::vector<std::string> feature_names;  // defaults to x1..xm
};

// Perturbs around x, queries the black box once, trains the surrogate on
// the responses and scores its fidelity (R^2 on the perturbed set).
LocalExplanation explain_local(const Eigen::VectorXd& x, BlackBox& blackbox, const PerturbationSpec& spec,
                               const TrainConfig& config, const LocalOptions& options = {});

}  // namespace egbm
