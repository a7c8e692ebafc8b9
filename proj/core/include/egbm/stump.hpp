#pragma once

#include <Eigen/Dense>

#include "egbm/rng.hpp"

namespace egbm {

// Depth-1 regression tree over a single feature. Rows with x <= threshold
// take left_value, the others right_value.
struct Stump {
  double threshold = 0.0;
  double left_value = 0.0;
  double right_value = 0.0;

  [[nodiscard]] double predict(double x) const { return x <= threshold ? left_value : right_value; }

  friend bool operator==(const Stump&, const Stump&) = default;
};

// Leaf values are the side means of `targets`; an empty side takes the overall
// mean. Throws DataError on length mismatch or empty input.
Stump fit_stump_at(const Eigen::Ref<const Eigen::VectorXd>& xs,
                   const Eigen::Ref<const Eigen::VectorXd>& targets, double threshold);

// Partially randomized stump: the threshold is drawn uniformly from
// [min(xs), max(xs)] and the leaves are fitted as in fit_stump_at.
Stump fit_stump(const Eigen::Ref<const Eigen::VectorXd>& xs,
                const Eigen::Ref<const Eigen::VectorXd>& targets, Rng& rng);

inline double stump_predict(const Stump& stump, double x) { return stump.predict(x); }

}  // namespace egbm
