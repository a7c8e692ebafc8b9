#include <gtest/gtest.h>

#include "egbm/error.hpp"
#include "egbm/explain.hpp"
#include "egbm/synthetic.hpp"

using namespace egbm;

namespace {

TrainResult linear_run(int iterations = 30) {
  TrainConfig c;
  c.iterations = iterations;
  c.seed = 2;
  return train(gen_linear(500, kDefaultNoiseStd, 2), c);
}

}  // namespace

TEST(Explain, ImportanceIsWeightTimesShapeSpread) {
  const Dataset d = gen_linear(500, kDefaultNoiseStd, 2);
  const TrainResult r = linear_run();
  const ImportanceReport rep = feature_importances(r.model, d);
  const Eigen::MatrixXd g = shape_matrix(r.model, d.features);
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    EXPECT_NEAR(rep.importance(k), std::abs(r.model.weights(k)) * population_std(g.col(k)), 1e-12);
    EXPECT_DOUBLE_EQ(rep.raw_weight(k), r.model.weights(k));
  }
  EXPECT_EQ(rep.ranking.front(), 1u);
  for (std::size_t k = 1; k < rep.ranking.size(); ++k) {
    EXPECT_GE(rep.importance(static_cast<Eigen::Index>(rep.ranking[k - 1])),
              rep.importance(static_cast<Eigen::Index>(rep.ranking[k])));
  }
}

TEST(Explain, ZeroWeightGivesZeroImportance) {
  const Dataset d = gen_linear(500, kDefaultNoiseStd, 2);
  EGBMModel m = linear_run().model;
  m.weights(3) = 0.0;
  EXPECT_EQ(feature_importances(m, d).importance(3), 0.0);
  EXPECT_EQ(feature_importances(m, d, ImportanceScale::kFeatureValues).importance(3), 0.0);
}

TEST(Explain, SchemaMismatchRejected) {
  Dataset d = gen_linear(50, kDefaultNoiseStd, 2);
  d.feature_names[0] = "other";
  EXPECT_THROW(feature_importances(linear_run(3).model, d), DataError);
}

TEST(Explain, ShapeExport) {
  const Dataset d = gen_linear(500, kDefaultNoiseStd, 2);
  const EGBMModel m = linear_run().model;
  const ShapeTable t = export_shape(m, d.features, 1, 25, false);
  ASSERT_EQ(t.grid.size(), 25);
  EXPECT_DOUBLE_EQ(t.grid(0), d.features.col(1).minCoeff());
  EXPECT_DOUBLE_EQ(t.grid(24), d.features.col(1).maxCoeff());
  EXPECT_FALSE(t.constant);
  EXPECT_LT(spearman(t.grid, t.contribution), -0.9);
  const ShapeTable s = export_shape(m, d.features, 1, 25, true);
  EXPECT_NEAR(s.contribution.minCoeff(), 0.0, 1e-12);
  EXPECT_NEAR(s.contribution.maxCoeff(), 1.0, 1e-12);
}

TEST(Explain, ConvergenceStableOnLinear) {
  const TrainResult r = linear_run(100);
  const auto diag = convergence_check(r.history, 20, kDefaultConvergenceThreshold);
  EXPECT_TRUE(diag.stabilized);
  EXPECT_LT(diag.relative_drift, kDefaultConvergenceThreshold);
  EXPECT_EQ(default_convergence_window(100), 20);
  EXPECT_EQ(default_convergence_window(20), 10);
}

TEST(Explain, ConvergenceFlagsOscillation) {
  TrainingHistory h;
  h.weight_trajectory.resize(20, 2);
  for (Eigen::Index s = 0; s < 20; ++s) h.weight_trajectory.row(s) << 1.0, (s % 2 == 0 ? 0.5 : 1.5);
  const auto diag = convergence_check(h, 10, 0.05);
  EXPECT_FALSE(diag.stabilized);
  EXPECT_NEAR(diag.relative_drift, 0.5, 1e-12);
}

TEST(Explain, RSquaredAndSpearman) {
  const Eigen::Vector4d y(1.0, 2.0, 3.0, 4.0);
  EXPECT_DOUBLE_EQ(r_squared(y, y), 1.0);
  EXPECT_DOUBLE_EQ(r_squared(y, Eigen::Vector4d::Constant(2.5)), 0.0);
  EXPECT_DOUBLE_EQ(spearman(y, Eigen::Vector4d(1.0, 8.0, 27.0, 64.0)), 1.0);
  EXPECT_DOUBLE_EQ(spearman(y, -y), -1.0);
  EXPECT_NEAR(spearman(y, Eigen::Vector4d(1.0, 1.0, 2.0, 2.0)), 0.894427190999916, 1e-12);
}
