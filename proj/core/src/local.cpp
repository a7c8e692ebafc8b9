#include "egbm/local.hpp"

#include <algorithm>

#include "egbm/error.hpp"
#include "egbm/rng.hpp"

namespace egbm {

Eigen::MatrixXd perturb_gaussian(const Eigen::VectorXd& x, const Eigen::VectorXd& sigma, Eigen::Index count,
                                 std::uint64_t seed) {
  if (count < 2) throw ConfigError("perturbation count must be >= 2");
  if (sigma.size() != 1 && sigma.size() != x.size()) throw ConfigError("sigma must be a scalar or one value per feature");
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    if (!(sigma(j) > 0.0)) throw ConfigError("gaussian sigma must be > 0");
  }
  Rng rng(seed, StreamPurpose::kPerturbation);
  Eigen::MatrixXd rows(count, x.size());
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) rows(i, j) = rng.normal(x(j), sigma.size() == 1 ? sigma(0) : sigma(j));
  }
  rows.row(count - 1) = x.transpose();
  return rows;
}

Eigen::MatrixXd perturb_uniform_box(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, Eigen::Index count,
                                    const Eigen::VectorXd& x, std::uint64_t seed) {
  if (count < 2) throw ConfigError("perturbation count must be >= 2");
  if (lower.size() != x.size() || upper.size() != x.size()) throw ConfigError("box bounds must match the point's size");
  Rng rng(seed, StreamPurpose::kPerturbation);
  const Eigen::VectorXd lo = lower.cwiseMin(upper);
  const Eigen::VectorXd hi = lower.cwiseMax(upper);
  Eigen::MatrixXd rows(count, x.size());
  for (Eigen::Index i = 0; i + 1 < count; ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) rows(i, j) = rng.uniform(lo(j), hi(j));
  }
  rows.row(count - 1) = x.transpose();
  return rows;
}

Eigen::MatrixXd perturb(const Eigen::VectorXd& x, const PerturbationSpec& spec) {
  if (const auto* g = std::get_if<GaussianPerturbation>(&spec.kind)) {
    return perturb_gaussian(x, g->sigma, spec.count, spec.seed);
  }
  const auto& box = std::get<UniformBoxPerturbation>(spec.kind);
  return perturb_uniform_box(box.lower, box.upper, spec.count, x, spec.seed);
}

MidpointPoi midpoint_poi(const Dataset& dataset, std::uint64_t seed) {
  const Eigen::Index n = dataset.rows();
  if (n < 2) throw DataError("midpoint needs at least 2 rows");
  Rng rng(seed, StreamPurpose::kSampling);
  const auto first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  auto second = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
  if (second >= first) ++second;
  MidpointPoi poi;
  poi.x1 = dataset.features.row(first).transpose();
  poi.x2 = dataset.features.row(second).transpose();
  poi.x = (poi.x1 + poi.x2) / 2.0;
  return poi;
}

LocalExplanation explain_local(const Eigen::VectorXd& x, BlackBox& blackbox, const PerturbationSpec& spec,
                               const TrainConfig& config, const LocalOptions& options) {
  config.validate();
  LocalExplanation result;
  result.point = x;
  const Eigen::MatrixXd raw = perturb(x, spec);
  result.responses = checked_query(blackbox, raw);

  Dataset local;
  local.feature_names = options.feature_names;
  if (local.feature_names.empty()) {
    for (Eigen::Index j = 1; j <= x.size(); ++j) local.feature_names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(local.feature_names.size()) != x.size()) {
    throw ConfigError("feature name count does not match the point's size");
  }
  result.standardized_features = options.standardize_features;
  result.feature_stats = column_stats(raw);
  local.features = options.standardize_features ? standardize_columns(raw, result.feature_stats) : raw;
  local.targets = result.responses;

  TrainResult trained = train(local, config);
  result.importance = feature_importances(trained.model, local);
  result.fidelity = r_squared(result.responses, model_predict(trained.model, local.features));
  result.raw_points = raw;
  result.perturbed = std::move(local.features);
  result.surrogate = std::move(trained.model);
  result.history = std::move(trained.history);
  return result;
}

}  // namespace egbm
