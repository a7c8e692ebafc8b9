#include <gtest/gtest.h>

#include "egbm/feature_gbm.hpp"
#include "egbm/trainer.hpp"

using namespace egbm;

TEST(FeatureGBM, EmptyPredictsZero) {
  const FeatureGBM g(0, 0.1);
  EXPECT_DOUBLE_EQ(g.predict(0.3), 0.0);
}

TEST(FeatureGBM, PredictionIsScaledSumOfStumps) {
  FeatureGBM g(2, 0.5);
  g.append({0.0, 1.0, 2.0});
  g.append({1.0, -4.0, 8.0});
  EXPECT_DOUBLE_EQ(g.predict(-1.0), 0.5 * (1.0 - 4.0));
  EXPECT_DOUBLE_EQ(g.predict(0.5), 0.5 * (2.0 - 4.0));
  EXPECT_DOUBLE_EQ(g.predict(2.0), 0.5 * (2.0 + 8.0));
}

TEST(FeatureGBM, AppendStepReducesResidualError) {
  Rng data(1);
  Eigen::VectorXd x(200), y(200);
  for (int i = 0; i < 200; ++i) {
    x(i) = data.uniform();
    y(i) = x(i) > 0.5 ? 1.0 : -1.0;
  }
  FeatureGBM g(0, 0.1);
  double prev = y.squaredNorm();
  Rng rng(2);
  for (int s = 0; s < 50; ++s) {
    g = gbm_append_step(g, x, y - gbm_predict(g, x), rng);
    const double err = (y - gbm_predict(g, x)).squaredNorm();
    EXPECT_LE(err, prev + 1e-12);
    prev = err;
  }
  EXPECT_EQ(g.stumps().size(), 50u);
}

TEST(FeatureGBM, AccumulateMatchesPredict) {
  const Eigen::VectorXd x{{0.1, 0.6, 0.9}};
  FeatureGBM g(0, 0.1);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(3);
  for (const Stump& s : {Stump{0.5, 1.0, 2.0}, Stump{0.7, -3.0, 5.0}}) {
    g.accumulate(s, x, acc);
    g.append(s);
  }
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(acc(i), g.predict(x(i)), 1e-15);
}

TEST(FeatureGBM, PretrainingMovesTowardLabels) {
  Rng data(5);
  Eigen::VectorXd x(300), labels(300);
  for (int i = 0; i < 300; ++i) {
    x(i) = data.uniform();
    labels(i) = x(i) > 0.5 ? 1.0 : 0.0;
  }
  const FeatureGBM g = gbm_pretrain_classification(FeatureGBM(0, 0.1), x, labels, 10, 9, {0, 0, 0});
  EXPECT_EQ(g.stumps().size(), 10u);
  const Eigen::VectorXd p = g.predict(x);
  double hi = 0.0, lo = 0.0;
  for (int i = 0; i < 300; ++i) (labels(i) > 0.5 ? hi : lo) += p(i);
  EXPECT_GT(hi, lo);
  EXPECT_EQ(g, gbm_pretrain_classification(FeatureGBM(0, 0.1), x, labels, 10, 9, {0, 0, 0}));
}
