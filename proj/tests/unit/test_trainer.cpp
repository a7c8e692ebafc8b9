#include <gtest/gtest.h>

#include <cmath>

#include "egbm/error.hpp"
#include "egbm/synthetic.hpp"
#include "egbm/trainer.hpp"

using namespace egbm;

namespace {

TrainConfig quick(int iterations = 20, std::uint64_t seed = 1) {
  TrainConfig c;
  c.iterations = iterations;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Trainer, ResidualsL2) {
  const Eigen::VectorXd r = compute_residuals_l2(Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.5, 3.0));
  EXPECT_EQ(r, Eigen::Vector2d(0.5, -1.0));
}

TEST(Trainer, ResidualsLogisticAndFiniteDifference) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const double z = rng.normal(0.0, 4.0);
    const double y = t % 2;
    const auto loss = [y](double s) { return std::log1p(std::exp(s)) - y * s; };
    const double fd = -(loss(z + 1e-5) - loss(z - 1e-5)) / 2e-5;
    EXPECT_NEAR(compute_residuals_logistic(Eigen::VectorXd::Constant(1, y), Eigen::VectorXd::Constant(1, z))(0), fd,
                1e-6);
  }
  EXPECT_THROW(compute_residuals_logistic(Eigen::VectorXd::Constant(1, 0.5), Eigen::VectorXd::Zero(1)), DataError);
}

TEST(Trainer, SigmoidIsStable) {
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
  EXPECT_NEAR(sigmoid(-800.0), 0.0, 1e-300);
  EXPECT_DOUBLE_EQ(sigmoid(800.0), 1.0);
}

TEST(Trainer, BinaryLabelsAcceptsBothEncodings) {
  EXPECT_EQ(binary_labels(Eigen::Vector3d(-1.0, 1.0, -1.0)), Eigen::Vector3d(0.0, 1.0, 0.0));
  EXPECT_EQ(binary_labels(Eigen::Vector3d(0.0, 1.0, 1.0)), Eigen::Vector3d(0.0, 1.0, 1.0));
  EXPECT_THROW(binary_labels(Eigen::Vector3d(0.0, 1.0, 2.0)), DataError);
}

TEST(Trainer, ConfigValidation) {
  TrainConfig c;
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.iterations = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.learning_rate = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(TrainConfig{}.validate());
}

TEST(Trainer, HistoryFollowsSmoothingRecurrence) {
  const Dataset d = gen_linear(300, kDefaultNoiseStd, 2);
  const TrainConfig c = quick(15);
  const TrainResult r = train(d, c);
  const auto& w = r.history.weight_trajectory;
  const auto& v = r.history.lasso_weights;
  ASSERT_EQ(w.rows(), 15);
  Eigen::VectorXd prev = Eigen::VectorXd::Ones(d.cols());
  for (Eigen::Index s = 0; s < w.rows(); ++s) {
    const Eigen::VectorXd expected = update_weights(prev, v.row(s).transpose(), c.alpha);
    EXPECT_EQ(w.row(s).transpose(), expected);
    prev = w.row(s).transpose();
  }
  EXPECT_EQ(r.model.weights, prev);
}

TEST(Trainer, UpdateWeights) {
  EXPECT_EQ(update_weights(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(0.0, 2.0), 0.25), Eigen::Vector2d(0.75, 1.25));
}

TEST(Trainer, Deterministic) {
  const Dataset d = gen_nonlinear(300, kDefaultNoiseStd, 3);
  TrainConfig c = quick(10, 4);
  const TrainResult a = train(d, c);
  c.threads = 4;
  const TrainResult b = train(d, c);
  EXPECT_EQ(a.model.weights, b.model.weights);
  EXPECT_EQ(a.model.intercept, b.model.intercept);
  for (std::size_t k = 0; k < a.model.gbms.size(); ++k) EXPECT_EQ(a.model.gbms[k], b.model.gbms[k]);
  EXPECT_EQ(a.history.weight_trajectory, b.history.weight_trajectory);
  EXPECT_EQ(a.history.training_loss, b.history.training_loss);
}

TEST(Trainer, FeaturePermutationEquivariance) {
  const Dataset d = gen_linear(300, kDefaultNoiseStd, 5);
  const std::vector<Eigen::Index> perm = {3, 0, 6, 1, 5, 2, 4};
  Dataset p = d;
  TrainConfig cp = quick(10, 6);
  for (std::size_t j = 0; j < perm.size(); ++j) {
    p.features.col(static_cast<Eigen::Index>(j)) = d.features.col(perm[j]);
    p.feature_names[j] = d.feature_names[static_cast<std::size_t>(perm[j])];
    cp.feature_stream_ids.push_back(static_cast<std::uint64_t>(perm[j]));
  }
  const TrainResult a = train(d, quick(10, 6));
  const TrainResult b = train(p, cp);
  for (std::size_t j = 0; j < perm.size(); ++j) {
    const auto k = static_cast<std::size_t>(perm[j]);
    EXPECT_NEAR(b.model.weights(static_cast<Eigen::Index>(j)), a.model.weights(perm[j]), 1e-6);
    for (double x : {0.05, 0.3, 0.62, 0.97}) EXPECT_NEAR(b.model.gbms[j].predict(x), a.model.gbms[k].predict(x), 1e-6);
  }
}

TEST(Trainer, PredictionIsAdditive) {
  const Dataset d = gen_polynomial(200, kDefaultNoiseStd, 7);
  const TrainResult r = train(d, quick(10));
  const Eigen::MatrixXd g = shape_matrix(r.model, d.features);
  const Eigen::VectorXd score = model_score(r.model, d.features);
  EXPECT_LT((score.array() - (g * r.model.weights).array() - r.model.intercept).abs().maxCoeff(), 1e-10);
  const Eigen::VectorXd pred = model_predict(r.model, d.features);
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_NEAR(pred(i), r.model.target_stats.invert(score(i)), 1e-12);
}

TEST(Trainer, RegressionLossDecreases) {
  const Dataset d = gen_linear(500, kDefaultNoiseStd, 8);
  const TrainResult r = train(d, quick(40));
  EXPECT_LT(r.history.training_loss(39), 0.5 * r.history.training_loss(0));
}

TEST(Trainer, ClassificationLearnsThresholdLabels) {
  Dataset d = gen_linear(600, kDefaultNoiseStd, 1);
  for (Eigen::Index i = 0; i < d.rows(); ++i) d.targets(i) = d.features(i, 1) > 0.5 ? 1.0 : -1.0;
  TrainConfig c = quick(30);
  c.task = Task::kClassification;
  const TrainResult r = train(d, c);
  EXPECT_EQ(r.model.task, Task::kClassification);
  const Eigen::VectorXd p = model_predict(r.model, d.features);
  EXPECT_GE(p.minCoeff(), 0.0);
  EXPECT_LE(p.maxCoeff(), 1.0);
  int correct = 0;
  for (Eigen::Index i = 0; i < d.rows(); ++i) correct += (p(i) > 0.5) == (d.targets(i) > 0.0) ? 1 : 0;
  EXPECT_GT(correct, 540);
  EXPECT_LT(r.history.training_loss(29), 0.8 * std::log(2.0));
  EXPECT_LT(r.history.training_loss(29), r.history.training_loss(0));
  const Eigen::VectorXd imp = (shape_matrix(r.model, d.features).rowwise() -
                               shape_matrix(r.model, d.features).colwise().mean()).colwise().norm().transpose();
  EXPECT_GT(std::abs(r.model.weights(1)) * imp(1), std::abs(r.model.weights(0)) * imp(0));
}

TEST(Trainer, ConstantTargetRejected) {
  Dataset d = gen_linear(50, kDefaultNoiseStd, 1);
  d.targets.setConstant(2.0);
  EXPECT_THROW(train(d, quick(5)), DegenerateTargetError);
}

TEST(Trainer, UnstandardizedInputsMatch) {
  const Dataset d = gen_linear(200, kDefaultNoiseStd, 9);
  const ColumnStats stats = column_stats(d.features);
  Dataset z = d;
  z.features = standardize_columns(d.features, stats);
  const TrainResult r = train(z, quick(8));
  const EGBMModel raw = unstandardize_inputs(r.model, stats);
  EXPECT_LT((model_predict(raw, d.features) - model_predict(r.model, z.features)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Trainer, VariantSwitchesRun) {
  const Dataset d = gen_linear(200, kDefaultNoiseStd, 10);
  TrainConfig c = quick(5);
  c.zero_initial_residuals = true;
  c.double_weight_targets = true;
  c.lasso_target = LassoTarget::kPreviousResiduals;
  c.inner_steps = 3;
  c.lasso.cross_validate = false;
  c.lasso.lambda = 0.01;
  const TrainResult r = train(d, c);
  EXPECT_EQ(r.history.weight_trajectory.rows(), 5);
  for (double l : r.history.lambda_used) EXPECT_DOUBLE_EQ(l, 0.01);
}
