#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "egbm/rng.hpp"
#include "egbm/stump.hpp"

namespace egbm {

// Gradient boosting over a single feature with a constant learning rate. Its
// accumulated prediction is the shape function of that feature.
class FeatureGBM {
 public:
  FeatureGBM() = default;
  FeatureGBM(std::size_t feature_index, double learning_rate);
  FeatureGBM(std::size_t feature_index, double learning_rate, std::vector<Stump> stumps);

  [[nodiscard]] std::size_t feature_index() const { return feature_index_; }
  [[nodiscard]] double learning_rate() const { return learning_rate_; }
  [[nodiscard]] const std::vector<Stump>& stumps() const { return stumps_; }
  [[nodiscard]] bool empty() const { return stumps_.empty(); }

  // Fits one stump to `targets` and appends it. Returns the appended stump.
  const Stump& append_step(const Eigen::Ref<const Eigen::VectorXd>& xs,
                           const Eigen::Ref<const Eigen::VectorXd>& targets, Rng& rng);
  void append(const Stump& stump) { stumps_.push_back(stump); }

  [[nodiscard]] double predict(double x) const;
  [[nodiscard]] Eigen::VectorXd predict(const Eigen::Ref<const Eigen::VectorXd>& xs) const;

  // Adds learning_rate * stump(x) to `accumulated` for every row, matching
  // the summation order of predict().
  void accumulate(const Stump& stump, const Eigen::Ref<const Eigen::VectorXd>& xs,
                  Eigen::Ref<Eigen::VectorXd> accumulated) const;

  friend bool operator==(const FeatureGBM&, const FeatureGBM&) = default;

 private:
  std::size_t feature_index_ = 0;
  double learning_rate_ = 0.1;
  std::vector<Stump> stumps_;
};

// Returns a copy of `gbm` with one more stump fitted to `residual_targets`.
FeatureGBM gbm_append_step(FeatureGBM gbm, const Eigen::Ref<const Eigen::VectorXd>& xs,
                           const Eigen::Ref<const Eigen::VectorXd>& residual_targets, Rng& rng);

inline Eigen::VectorXd gbm_predict(const FeatureGBM& gbm,
                                   const Eigen::Ref<const Eigen::VectorXd>& xs) {
  return gbm.predict(xs);
}

// Runs `steps` boosting steps on logistic residuals labels - sigmoid(f(x)),
// where f is the GBM's own current prediction. `stream` supplies the
// feature/iteration ids; the step id is the step counter. Labels must be 0/1.
FeatureGBM gbm_pretrain_classification(FeatureGBM gbm, const Eigen::Ref<const Eigen::VectorXd>& xs,
                                       const Eigen::Ref<const Eigen::VectorXd>& labels, int steps,
                                       std::uint64_t seed, StreamId stream);

}  // namespace egbm
