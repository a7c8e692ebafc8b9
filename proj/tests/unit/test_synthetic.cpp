#include <gtest/gtest.h>

#include "egbm/error.hpp"
#include "egbm/synthetic.hpp"

using namespace egbm;

TEST(Synthetic, LinearResponse) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(7);
  EXPECT_DOUBLE_EQ(linear_response(x), 0.0);
  x << 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0;
  EXPECT_DOUBLE_EQ(linear_response(x), 10.0 - 20.0 - 2.0 + 3.0);
}

TEST(Synthetic, LinearTargetSpread) {
  const Dataset d = gen_linear(100000, kDefaultNoiseStd, 1);
  EXPECT_EQ(d.cols(), 7);
  EXPECT_NEAR(population_std(d.targets), 6.55, 0.05);
  EXPECT_GE(d.features.minCoeff(), 0.0);
  EXPECT_LT(d.features.maxCoeff(), 1.0);
}

TEST(Synthetic, NonlinearTerm) {
  Eigen::VectorXd a = Eigen::VectorXd::Constant(7, 0.5), b = a;
  b(6) = 1.0;
  EXPECT_NEAR(nonlinear_response(b) - nonlinear_response(a), 25.0, 1e-12);
}

TEST(Synthetic, ChessboardLabels) {
  EXPECT_EQ(chessboard_label(0.1, 0.1, 4), 1.0);
  EXPECT_EQ(chessboard_label(0.3, 0.1, 4), -1.0);
  EXPECT_EQ(chessboard_label(0.3, 0.3, 4), 1.0);
  EXPECT_EQ(chessboard_label(1.0, 0.1, 4), -1.0);  // upper edge clamps into the last cell
  const Dataset d = gen_chessboard(500, 4, 3, true);
  EXPECT_EQ(d.cols(), 2);
  for (Eigen::Index i = 0; i < d.rows(); ++i) EXPECT_TRUE(d.targets(i) == 0.0 || d.targets(i) == 1.0);
}

TEST(Synthetic, PolynomialHasFiveFeatures) { EXPECT_EQ(gen_polynomial(10, 0.0, 1).cols(), 5); }

TEST(Synthetic, Deterministic) {
  for (const auto kind : {SyntheticKind::kLinear, SyntheticKind::kNonlinear, SyntheticKind::kChessboard,
                          SyntheticKind::kPolynomial}) {
    SyntheticSpec s;
    s.kind = kind;
    s.rows = 50;
    s.seed = 4;
    EXPECT_EQ(generate(s).features, generate(s).features);
    EXPECT_EQ(generate(s).targets, generate(s).targets);
    EXPECT_EQ(synthetic_kind_from_string(to_string(kind)), kind);
  }
}

TEST(Synthetic, UnknownKindListsValidOnes) {
  try {
    synthetic_kind_from_string("spiral");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("chessboard"), std::string::npos);
  }
}
