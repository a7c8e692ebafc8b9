#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "egbm/dataset.hpp"

namespace egbm {

enum class SyntheticKind { kLinear, kNonlinear, kChessboard, kPolynomial };

SyntheticKind synthetic_kind_from_string(const std::string& name);
std::string to_string(SyntheticKind kind);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::kLinear;
  Eigen::Index rows = 1000;
  double noise_std = 0.05;
  int cells = 4;
  bool zero_one_labels = false;  // chessboard: {0,1} instead of {-1,+1}
  std::uint64_t seed = 0;
};

inline constexpr double kDefaultNoiseStd = 0.05;

// Noise-free target functions.
double linear_response(const Eigen::Ref<const Eigen::VectorXd>& x);
double nonlinear_response(const Eigen::Ref<const Eigen::VectorXd>& x);
double polynomial_response(const Eigen::Ref<const Eigen::VectorXd>& x);
// +1 when the cell parity is even, -1 otherwise; coordinates at 1 clamp to the
// last cell.
double chessboard_label(double x1, double x2, int cells);

Dataset gen_linear(Eigen::Index rows, double noise_std, std::uint64_t seed);
Dataset gen_nonlinear(Eigen::Index rows, double noise_std, std::uint64_t seed);
Dataset gen_chessboard(Eigen::Index rows, int cells, std::uint64_t seed, bool zero_one_labels = false);
Dataset gen_polynomial(Eigen::Index rows, double noise_std, std::uint64_t seed);

Dataset generate(const SyntheticSpec& spec);

}  // namespace egbm
