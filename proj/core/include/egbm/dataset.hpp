#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace egbm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// N rows of m real features plus one real target per row.
struct Dataset {
  Matrix features;  // N x m
  Vector targets;   // N
  std::vector<std::string> feature_names;

  [[nodiscard]] Eigen::Index rows() const { return features.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return features.cols(); }
};

// Validates the Dataset invariants (N >= 2, m >= 1, finite values, unique
// non-empty names). Throws DataError.
void validate(const Dataset& dataset);

struct StandardizationStats {
  double target_mean = 0.0;
  double target_std = 1.0;  // population

  [[nodiscard]] double apply(double y) const { return (y - target_mean) / target_std; }
  [[nodiscard]] double invert(double z) const { return z * target_std + target_mean; }
};

struct ColumnStats {
  Vector mean;
  Vector std;  // population
};

// Reads a headered, comma separated numeric file. The named column becomes
// the targets, the remaining columns the features in header order.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column);

// Same as load_csv but from an in-memory buffer; `source` names it in errors.
Dataset parse_csv(const std::string& text, const std::string& target_column,
                  const std::string& source = "<memory>");

// Reads the columns named in `names` (in that order) from a headered numeric
// CSV; other columns are ignored. Throws DataError for a missing column.
Matrix parse_feature_csv(const std::string& text, const std::vector<std::string>& names,
                         const std::string& source = "<memory>");

// Writes features followed by a target column named `target_name`, numbers in
// 17 significant digits.
std::string to_csv(const Dataset& dataset, const std::string& target_name = "y");

// Throws DegenerateTargetError when the targets are constant.
std::pair<Vector, StandardizationStats> standardize_targets(const Vector& targets);

ColumnStats column_stats(const Matrix& features);

// Population mean and standard deviation of a vector.
double mean_of(const Eigen::Ref<const Vector>& values);
double population_std(const Eigen::Ref<const Vector>& values);

// Maps every feature column to zero mean / unit population std. Constant
// columns are only centered.
Matrix standardize_columns(const Matrix& features, const ColumnStats& stats);

// Formats a double with 17 significant digits (shortest form that
// round-trips is not guaranteed, exactness is).
std::string format_double(double value);

}  // namespace egbm
