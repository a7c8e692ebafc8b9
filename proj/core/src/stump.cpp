#include "egbm/stump.hpp"

#include "egbm/error.hpp"

namespace egbm {

namespace {

void check_inputs(const Eigen::Ref<const Eigen::VectorXd>& xs, const Eigen::Ref<const Eigen::VectorXd>& targets) {
  if (xs.size() != targets.size()) {
    throw DataError("stump: " + std::to_string(xs.size()) + " feature values but " + std::to_string(targets.size()) +
                    " targets");
  }
  if (xs.size() == 0) throw DataError("stump: empty input");
}

}  // namespace

Stump fit_stump_at(const Eigen::Ref<const Eigen::VectorXd>& xs, const Eigen::Ref<const Eigen::VectorXd>& targets,
                   double threshold) {
  check_inputs(xs, targets);
  double left_sum = 0.0, right_sum = 0.0;
  Eigen::Index left_count = 0;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    if (xs(i) <= threshold) {
      left_sum += targets(i);
      ++left_count;
    } else {
      right_sum += targets(i);
    }
  }
  const Eigen::Index right_count = xs.size() - left_count;
  const double overall = (left_sum + right_sum) / static_cast<double>(xs.size());
  Stump stump;
  stump.threshold = threshold;
  stump.left_value = left_count > 0 ? left_sum / static_cast<double>(left_count) : overall;
  stump.right_value = right_count > 0 ? right_sum / static_cast<double>(right_count) : overall;
  return stump;
}

Stump fit_stump(const Eigen::Ref<const Eigen::VectorXd>& xs, const Eigen::Ref<const Eigen::VectorXd>& targets,
                Rng& rng) {
  check_inputs(xs, targets);
  const double threshold = rng.uniform(xs.minCoeff(), xs.maxCoeff());
  return fit_stump_at(xs, targets, threshold);
}

}  // namespace egbm
