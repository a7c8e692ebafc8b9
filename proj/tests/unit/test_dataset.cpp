#include <gtest/gtest.h>

#include <cmath>

#include "egbm/dataset.hpp"
#include "egbm/error.hpp"

using namespace egbm;

TEST(Dataset, ParsesTargetAnywhere) {
  const Dataset d = parse_csv("a,y,b\n1,10,2\n3,20,4\n", "y");
  ASSERT_EQ(d.rows(), 2);
  ASSERT_EQ(d.cols(), 2);
  EXPECT_EQ(d.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(d.features(1, 1), 4.0);
  EXPECT_DOUBLE_EQ(d.targets(1), 20.0);
}

TEST(Dataset, MissingTargetColumn) { EXPECT_THROW(parse_csv("a,b\n1,2\n3,4\n", "y"), DataError); }

TEST(Dataset, UnparseableCellNamesRowAndColumn) {
  try {
    parse_csv("a,b,y\n1,abc,3\n4,5,6\n", "y");
    FAIL();
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("abc"), std::string::npos);
    EXPECT_NE(msg.find("row 2"), std::string::npos);
    EXPECT_NE(msg.find("\"b\""), std::string::npos);
  }
}

TEST(Dataset, TooFewRows) { EXPECT_THROW(parse_csv("a,y\n1,2\n", "y"), DataError); }

TEST(Dataset, CsvRoundTripIsExact) {
  Dataset d;
  d.features = Eigen::MatrixXd{{0.1, 1.0 / 3.0}, {-2.5e-17, 7.0}};
  d.targets = Eigen::VectorXd{{std::acos(-1.0), -1.0}};
  d.feature_names = {"p", "q"};
  const Dataset back = parse_csv(to_csv(d, "t"), "t");
  EXPECT_EQ(back.features, d.features);
  EXPECT_EQ(back.targets, d.targets);
  EXPECT_EQ(back.feature_names, d.feature_names);
}

TEST(Dataset, PopulationStd) {
  const Eigen::VectorXd v{{1.0, 2.0, 3.0}};
  EXPECT_NEAR(population_std(v), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(population_std(v), 0.816497, 1e-6);
  EXPECT_DOUBLE_EQ(mean_of(v), 2.0);
}

TEST(Dataset, StandardizeTargets) {
  const Eigen::VectorXd y{{2.0, 4.0, 6.0, 8.0}};
  const auto [z, stats] = standardize_targets(y);
  EXPECT_NEAR(z.mean(), 0.0, 1e-15);
  EXPECT_NEAR(population_std(z), 1.0, 1e-15);
  for (Eigen::Index i = 0; i < y.size(); ++i) EXPECT_NEAR(stats.invert(z(i)), y(i), 1e-14);
}

TEST(Dataset, ConstantTargetIsDegenerate) {
  EXPECT_THROW(standardize_targets(Eigen::VectorXd::Constant(5, 3.0)), DegenerateTargetError);
}

TEST(Dataset, ConstantColumnIsOnlyCentered) {
  const Eigen::MatrixXd x{{1.0, 5.0}, {3.0, 5.0}};
  const Eigen::MatrixXd z = standardize_columns(x, column_stats(x));
  EXPECT_DOUBLE_EQ(z(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(z(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(z(0, 1), 0.0);
}

TEST(Dataset, FeatureCsvSelectsNamedColumns) {
  const Eigen::MatrixXd x = parse_feature_csv("b,y,a\n1,2,3\n4,5,6\n", {"a", "b"});
  EXPECT_EQ(x, (Eigen::MatrixXd{{3.0, 1.0}, {6.0, 4.0}}));
  EXPECT_THROW(parse_feature_csv("b,y\n1,2\n", {"a"}), DataError);
}
