#include "egbm/feature_gbm.hpp"

#include "egbm/error.hpp"
#include "egbm/trainer.hpp"

namespace egbm {

FeatureGBM::FeatureGBM(std::size_t feature_index, double learning_rate)
    : feature_index_(feature_index), learning_rate_(learning_rate) {}

FeatureGBM::FeatureGBM(std::size_t feature_index, double learning_rate, std::vector<Stump> stumps)
    : feature_index_(feature_index), learning_rate_(learning_rate), stumps_(std::move(stumps)) {}

const Stump& FeatureGBM::append_step(const Eigen::Ref<const Eigen::VectorXd>& xs,
                                     const Eigen::Ref<const Eigen::VectorXd>& targets, Rng& rng) {
  stumps_.push_back(fit_stump(xs, targets, rng));
  return stumps_.back();
}

double FeatureGBM::predict(double x) const {
  double sum = 0.0;
  for (const auto& s : stumps_) sum += learning_rate_ * s.predict(x);
  return sum;
}

Eigen::VectorXd FeatureGBM::predict(const Eigen::Ref<const Eigen::VectorXd>& xs) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(xs.size());
  for (const auto& s : stumps_) accumulate(s, xs, out);
  return out;
}

void FeatureGBM::accumulate(const Stump& stump, const Eigen::Ref<const Eigen::VectorXd>& xs,
                            Eigen::Ref<Eigen::VectorXd> accumulated) const {
  for (Eigen::Index i = 0; i < xs.size(); ++i) accumulated(i) += learning_rate_ * stump.predict(xs(i));
}

FeatureGBM gbm_append_step(FeatureGBM gbm, const Eigen::Ref<const Eigen::VectorXd>& xs,
                           const Eigen::Ref<const Eigen::VectorXd>& residual_targets, Rng& rng) {
  if (xs.size() != residual_targets.size()) throw DataError("gbm step: feature/target length mismatch");
  gbm.append_step(xs, residual_targets, rng);
  return gbm;
}

FeatureGBM gbm_pretrain_classification(FeatureGBM gbm, const Eigen::Ref<const Eigen::VectorXd>& xs,
                                       const Eigen::Ref<const Eigen::VectorXd>& labels, int steps,
                                       std::uint64_t seed, StreamId stream) {
  if (xs.size() != labels.size()) throw DataError("pretraining: feature/label length mismatch");
  if (steps < 0) throw ConfigError("pretraining steps must be >= 0");
  const Eigen::VectorXd y = labels;
  Eigen::VectorXd score = gbm.predict(xs);
  for (int t = 0; t < steps; ++t) {
    const Eigen::VectorXd residual = compute_residuals_logistic(y, score);
    Rng rng(seed, StreamPurpose::kStump, {stream.feature, stream.iteration, static_cast<std::uint64_t>(t)});
    const Stump& stump = gbm.append_step(xs, residual, rng);
    gbm.accumulate(stump, xs, score);
  }
  if (steps == 0) (void)compute_residuals_logistic(y, score);  // label check
  return gbm;
}

}  // namespace egbm
