#include "egbm/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "egbm/error.hpp"
#include "egbm/lasso.hpp"
#include "egbm/parallel.hpp"

namespace egbm {

std::string to_string(Task task) { return task == Task::kRegression ? "regression" : "classification"; }

Task task_from_string(const std::string& name) {
  if (name == "regression") return Task::kRegression;
  if (name == "classification") return Task::kClassification;
  throw ConfigError("unknown task '" + name + "' (expected regression or classification)");
}

void TrainConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ConfigError("learning rate must be in (0, 1]");
  if (inner_steps < 1) throw ConfigError("inner steps must be >= 1");
  if (pretrain_steps < 0) throw ConfigError("pretraining steps must be >= 0");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (lasso.cross_validate) {
    if (lasso.folds < 2) throw ConfigError("cross validation needs at least 2 folds");
    if (lasso.grid_size < 1) throw ConfigError("lambda grid size must be >= 1");
    if (!(lasso.grid_ratio > 0.0 && lasso.grid_ratio <= 1.0)) throw ConfigError("lambda grid ratio must be in (0, 1]");
  } else if (!(lasso.lambda >= 0.0) || !std::isfinite(lasso.lambda)) {
    throw ConfigError("lasso lambda must be >= 0");
  }
}

Eigen::VectorXd compute_residuals_l2(const Eigen::VectorXd& y, const Eigen::VectorXd& prediction) {
  if (y.size() != prediction.size()) throw DataError("residuals: length mismatch");
  return y - prediction;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::VectorXd compute_residuals_logistic(const Eigen::VectorXd& labels, const Eigen::VectorXd& score) {
  if (labels.size() != score.size()) throw DataError("residuals: length mismatch");
  Eigen::VectorXd r(labels.size());
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) != 0.0 && labels(i) != 1.0) {
      throw DataError("classification labels must be 0 or 1 (row " + std::to_string(i + 1) + ")");
    }
    r(i) = labels(i) - sigmoid(score(i));
  }
  return r;
}

Eigen::VectorXd update_weights(const Eigen::VectorXd& w_prev, const Eigen::VectorXd& v, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0, 1]");
  if (w_prev.size() != v.size()) throw DataError("weight update: length mismatch");
  return (1.0 - alpha) * w_prev + alpha * v;
}

Eigen::VectorXd binary_labels(const Eigen::VectorXd& targets) {
  bool zero_one = true, plus_minus = true;
  for (Eigen::Index i = 0; i < targets.size(); ++i) {
    const double t = targets(i);
    zero_one = zero_one && (t == 0.0 || t == 1.0);
    plus_minus = plus_minus && (t == -1.0 || t == 1.0);
  }
  if (zero_one) return targets;
  if (plus_minus) return (targets.array() + 1.0) / 2.0;
  throw DataError("classification targets must be binary ({0,1} or {-1,+1})");
}

namespace {

double mean_cross_entropy(const Eigen::VectorXd& labels, const Eigen::VectorXd& score) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    // log(1 + e^z) - y z, evaluated without overflow.
    const double z = score(i);
    const double softplus = z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    total += softplus - labels(i) * z;
  }
  return total / static_cast<double>(labels.size());
}

// Intercept minimizing cross-entropy for a fixed offset, by Newton steps.
double fit_logistic_intercept(const Eigen::VectorXd& labels, const Eigen::VectorXd& offset, double start) {
  double b = start;
  for (int it = 0; it < 50; ++it) {
    double grad = 0.0, hess = 0.0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      const double p = sigmoid(b + offset(i));
      grad += p - labels(i);
      hess += p * (1.0 - p);
    }
    if (hess < 1e-12) break;
    const double step = std::clamp(grad / hess, -5.0, 5.0);
    b -= step;
    if (std::abs(step) < 1e-12) break;
  }
  return b;
}

}  // namespace

TrainResult train(const Dataset& dataset, const TrainConfig& config) {
  config.validate();
  validate(dataset);
  const Eigen::Index n = dataset.rows();
  const Eigen::Index m = dataset.cols();
  const auto T = config.iterations;
  const bool classification = config.task == Task::kClassification;

  TrainResult result;
  EGBMModel& model = result.model;
  model.task = config.task;
  model.feature_names = dataset.feature_names;
  model.learning_rate = config.learning_rate;

  Eigen::VectorXd y;
  if (classification) {
    y = binary_labels(dataset.targets);
    model.target_stats = {};
  } else {
    auto [z, stats] = standardize_targets(dataset.targets);
    y = std::move(z);
    model.target_stats = stats;
  }

  auto stream_feature = [&](Eigen::Index k) -> std::uint64_t {
    return config.feature_stream_ids.empty() ? static_cast<std::uint64_t>(k) : config.feature_stream_ids.at(k);
  };
  if (!config.feature_stream_ids.empty() && static_cast<Eigen::Index>(config.feature_stream_ids.size()) != m) {
    throw ConfigError("feature stream ids must have one entry per feature");
  }

  model.gbms.reserve(m);
  for (Eigen::Index k = 0; k < m; ++k) model.gbms.emplace_back(static_cast<std::size_t>(k), config.learning_rate);

  Eigen::MatrixXd shapes = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  double intercept = 0.0;
  Eigen::VectorXd residual;

  if (classification) {
    const double p = std::clamp(y.mean(), 1e-6, 1.0 - 1e-6);
    intercept = std::log(p / (1.0 - p));
    parallel_for(static_cast<std::size_t>(m), config.threads, [&](std::size_t k) {
      const auto col = static_cast<Eigen::Index>(k);
      model.gbms[k] = gbm_pretrain_classification(std::move(model.gbms[k]), dataset.features.col(col), y,
                                                  config.pretrain_steps, config.seed, {stream_feature(col), 0, 0});
      shapes.col(col) = model.gbms[k].predict(dataset.features.col(col));
    });
    residual = compute_residuals_logistic(y, Eigen::VectorXd::Constant(n, intercept));
  } else {
    residual = y;
  }
  if (config.zero_initial_residuals) residual.setZero();

  std::vector<int> folds_of_row;
  if (config.lasso.cross_validate) folds_of_row = fold_assignment(n, config.lasso.folds, config.seed);
  const LassoOptions lasso_options{};

  TrainingHistory& history = result.history;
  history.weight_trajectory.resize(T, m);
  history.lasso_weights.resize(T, m);
  history.training_loss.resize(T);
  history.lambda_used.reserve(T);

  for (int s = 1; s <= T; ++s) {
    // (a) one boosting round per feature on the shared residuals.
    parallel_for(static_cast<std::size_t>(m), config.threads, [&](std::size_t k) {
      const auto col = static_cast<Eigen::Index>(k);
      const auto xs = dataset.features.col(col);
      Eigen::VectorXd target = per_feature_targets(residual, w(col));
      if (config.double_weight_targets) target *= w(col);
      Eigen::VectorXd inner = Eigen::VectorXd::Zero(n);
      for (int t = 0; t < config.inner_steps; ++t) {
        Rng rng(config.seed, StreamPurpose::kStump,
                {stream_feature(col), static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(t)});
        const Eigen::VectorXd step_target = t == 0 ? target : Eigen::VectorXd(target - inner);
        const Stump& stump = model.gbms[k].append_step(xs, step_target, rng);
        model.gbms[k].accumulate(stump, xs, shapes.col(col));
        if (t + 1 < config.inner_steps) model.gbms[k].accumulate(stump, xs, inner);
      }
    });

    // (b)-(c) Lasso weights on the shape matrix.
    const Eigen::VectorXd& lasso_y = config.lasso_target == LassoTarget::kTargets ? y : residual;
    LassoSolution v;
    if (config.lasso.cross_validate) {
      const double top = lambda_max(shapes, lasso_y);
      if (top > 0.0) {
        v = lasso_cv_full(shapes, lasso_y, folds_of_row, config.lasso.folds,
                          lambda_grid(top, config.lasso.grid_size, config.lasso.grid_ratio), lasso_options)
                .solution;
      } else {
        v.weights = Eigen::VectorXd::Zero(m);
        v.intercept = lasso_y.mean();
        v.lambda_used = 0.0;
      }
    } else {
      v = lasso_fit({shapes, lasso_y, config.lasso.lambda}, lasso_options, nullptr);
    }

    // (d) smoothing.
    w = update_weights(w, v.weights, config.alpha);

    // (e) current predictions, (f) residuals.
    const Eigen::VectorXd offset = shapes * w;
    double loss;
    if (classification) {
      intercept = fit_logistic_intercept(y, offset, intercept);
      const Eigen::VectorXd score = offset.array() + intercept;
      residual = compute_residuals_logistic(y, score);
      loss = mean_cross_entropy(y, score);
    } else {
      intercept = y.mean() - shapes.colwise().mean().dot(w);
      const Eigen::VectorXd score = offset.array() + intercept;
      residual = compute_residuals_l2(y, score);
      loss = residual.squaredNorm() / static_cast<double>(n);
    }

    history.weight_trajectory.row(s - 1) = w.transpose();
    history.lasso_weights.row(s - 1) = v.weights.transpose();
    history.training_loss(s - 1) = loss;
    history.lambda_used.push_back(v.lambda_used);
  }

  model.weights = w;
  model.intercept = intercept;
  return result;
}

Eigen::MatrixXd shape_matrix(const EGBMModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.feature_count()) {
    throw DataError("model expects " + std::to_string(model.feature_count()) + " features, got " +
                    std::to_string(features.cols()));
  }
  Eigen::MatrixXd g(features.rows(), features.cols());
  for (Eigen::Index k = 0; k < features.cols(); ++k) g.col(k) = model.gbms[k].predict(features.col(k));
  return g;
}

Eigen::VectorXd model_score(const EGBMModel& model, const Eigen::MatrixXd& features) {
  const Eigen::MatrixXd g = shape_matrix(model, features);
  Eigen::VectorXd score = Eigen::VectorXd::Constant(features.rows(), model.intercept);
  for (Eigen::Index k = 0; k < g.cols(); ++k) score += model.weights(k) * g.col(k);
  return score;
}

EGBMModel unstandardize_inputs(EGBMModel model, const ColumnStats& stats) {
  if (stats.mean.size() != model.feature_count() || stats.std.size() != model.feature_count()) {
    throw DataError("column statistics do not match the model's feature count");
  }
  for (Eigen::Index k = 0; k < model.feature_count(); ++k) {
    const double scale = stats.std(k) > 0.0 ? stats.std(k) : 1.0;
    std::vector<Stump> stumps = model.gbms[k].stumps();
    for (auto& s : stumps) s.threshold = stats.mean(k) + scale * s.threshold;
    model.gbms[k] = FeatureGBM(model.gbms[k].feature_index(), model.gbms[k].learning_rate(), std::move(stumps));
  }
  return model;
}

Eigen::VectorXd model_predict(const EGBMModel& model, const Eigen::MatrixXd& features) {
  Eigen::VectorXd score = model_score(model, features);
  if (model.task == Task::kClassification) {
    for (Eigen::Index i = 0; i < score.size(); ++i) score(i) = sigmoid(score(i));
  } else {
    for (Eigen::Index i = 0; i < score.size(); ++i) score(i) = model.target_stats.invert(score(i));
  }
  return score;
}

}  // namespace egbm
