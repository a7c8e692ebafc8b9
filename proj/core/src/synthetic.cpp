#include "egbm/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "egbm/error.hpp"
#include "egbm/rng.hpp"

namespace egbm {

SyntheticKind synthetic_kind_from_string(const std::string& name) {
  if (name == "linear") return SyntheticKind::kLinear;
  if (name == "nonlinear") return SyntheticKind::kNonlinear;
  if (name == "chessboard") return SyntheticKind::kChessboard;
  if (name == "polynomial") return SyntheticKind::kPolynomial;
  throw ConfigError("unknown kind '" + name + "' (valid kinds: linear, nonlinear, chessboard, polynomial)");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::kLinear: return "linear";
    case SyntheticKind::kNonlinear: return "nonlinear";
    case SyntheticKind::kChessboard: return "chessboard";
    case SyntheticKind::kPolynomial: return "polynomial";
  }
  return "unknown";
}

double linear_response(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return 10.0 * x(0) - 20.0 * x(1) - 2.0 * x(2) + 3.0 * x(3);
}

double nonlinear_response(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double d = x(6) - 0.5;
  return 10.0 * x(0) - 20.0 * x(1) - 2.0 * x(2) + 3.0 * x(3) + 100.0 * d * d;
}

double polynomial_response(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return x(0) * x(0) + x(0) * x(1) - x(2) * x(3) + x(3);
}

double chessboard_label(double x1, double x2, int cells) {
  auto cell = [cells](double v) {
    const int c = static_cast<int>(std::floor(v * cells));
    return std::clamp(c, 0, cells - 1);
  };
  return (cell(x1) + cell(x2)) % 2 == 0 ? 1.0 : -1.0;
}

namespace {

std::vector<std::string> default_names(Eigen::Index m) {
  std::vector<std::string> names;
  for (Eigen::Index j = 1; j <= m; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

template <typename Response>
Dataset generate_regression(Eigen::Index rows, Eigen::Index m, double noise_std, std::uint64_t seed,
                            Response response) {
  if (rows < 2) throw ConfigError("synthetic data needs N >= 2");
  if (!(noise_std >= 0.0)) throw ConfigError("noise std must be >= 0");
  Rng rng(seed, StreamPurpose::kSynthetic);
  Dataset d;
  d.features.resize(rows, m);
  d.targets.resize(rows);
  d.feature_names = default_names(m);
  // Row-major draw order: features of row i, then its noise.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) d.features(i, j) = rng.uniform();
    const double eps = rng.normal();
    d.targets(i) = response(d.features.row(i).transpose()) + noise_std * eps;
  }
  return d;
}

}  // namespace

Dataset gen_linear(Eigen::Index rows, double noise_std, std::uint64_t seed) {
  return generate_regression(rows, 7, noise_std, seed, [](const Eigen::VectorXd& x) { return linear_response(x); });
}

Dataset gen_nonlinear(Eigen::Index rows, double noise_std, std::uint64_t seed) {
  return generate_regression(rows, 7, noise_std, seed,
                             [](const Eigen::VectorXd& x) { return nonlinear_response(x); });
}

Dataset gen_polynomial(Eigen::Index rows, double noise_std, std::uint64_t seed) {
  return generate_regression(rows, 5, noise_std, seed,
                             [](const Eigen::VectorXd& x) { return polynomial_response(x); });
}

Dataset gen_chessboard(Eigen::Index rows, int cells, std::uint64_t seed, bool zero_one_labels) {
  if (rows < 2) throw ConfigError("synthetic data needs N >= 2");
  if (cells < 2) throw ConfigError("chessboard needs at least 2 cells per axis");
  Rng rng(seed, StreamPurpose::kSynthetic);
  Dataset d;
  d.features.resize(rows, 2);
  d.targets.resize(rows);
  d.feature_names = default_names(2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    d.features(i, 0) = rng.uniform();
    d.features(i, 1) = rng.uniform();
    const double label = chessboard_label(d.features(i, 0), d.features(i, 1), cells);
    d.targets(i) = zero_one_labels ? (label > 0 ? 1.0 : 0.0) : label;
  }
  return d;
}

Dataset generate(const SyntheticSpec& spec) {
  switch (spec.kind) {
    case SyntheticKind::kLinear: return gen_linear(spec.rows, spec.noise_std, spec.seed);
    case SyntheticKind::kNonlinear: return gen_nonlinear(spec.rows, spec.noise_std, spec.seed);
    case SyntheticKind::kPolynomial: return gen_polynomial(spec.rows, spec.noise_std, spec.seed);
    case SyntheticKind::kChessboard: return gen_chessboard(spec.rows, spec.cells, spec.seed, spec.zero_one_labels);
  }
  throw ConfigError("unknown synthetic kind");
}

}  // namespace egbm
