#include "egbm/dataset.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "egbm/error.hpp"

namespace egbm {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(text.c_str(), &end);
  return end == text.c_str() + text.size() && errno != ERANGE;
}

}  // namespace

void validate(const Dataset& dataset) {
  if (dataset.rows() < 2) throw DataError("dataset needs at least 2 rows, got " + std::to_string(dataset.rows()));
  if (dataset.cols() < 1) throw DataError("dataset needs at least 1 feature");
  if (dataset.targets.size() != dataset.rows()) throw DataError("target count does not match row count");
  if (static_cast<Eigen::Index>(dataset.feature_names.size()) != dataset.cols())
    throw DataError("feature name count does not match column count");
  std::set<std::string> seen;
  for (const auto& name : dataset.feature_names) {
    if (name.empty()) throw DataError("empty feature name");
    if (!seen.insert(name).second) throw DataError("duplicate feature name '" + name + "'");
  }
  if (!dataset.features.allFinite()) throw DataError("non-finite feature value");
  if (!dataset.targets.allFinite()) throw DataError("non-finite target value");
}

Dataset parse_csv(const std::string& text, const std::string& target_column, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM
  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);

  Eigen::Index target_index = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] != target_column) continue;
    if (target_index >= 0) throw DataError(source + ": duplicate target column '" + target_column + "'");
    target_index = static_cast<Eigen::Index>(c);
  }
  if (target_index < 0) throw DataError(source + ": missing target column '" + target_column + "'");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError(source + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    }
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(trim(cells[c]), values[c]) || !std::isfinite(values[c])) {
        throw DataError(source + ": cannot parse '" + cells[c] + "' at row " + std::to_string(line_no) +
                        ", column \"" + header[c] + "\"");
      }
    }
    rows.push_back(std::move(values));
  }
  if (rows.size() < 2) throw DataError(source + ": need at least 2 data rows, got " + std::to_string(rows.size()));

  Dataset out;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(header.size()) - 1;
  out.features.resize(n, m);
  out.targets.resize(n);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (static_cast<Eigen::Index>(c) != target_index) out.feature_names.push_back(header[c]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index f = 0;
    for (Eigen::Index c = 0; c <= m; ++c) {
      if (c == target_index) {
        out.targets(i) = rows[i][c];
      } else {
        out.features(i, f++) = rows[i][c];
      }
    }
  }
  validate(out);
  return out;
}

Matrix parse_feature_csv(const std::string& text, const std::vector<std::string>& names, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty input");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);
  std::vector<std::size_t> columns;
  for (const auto& name : names) {
    std::size_t found = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) found = c;
    }
    if (found == header.size()) throw DataError(source + ": missing feature column '" + name + "'");
    columns.push_back(found);
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError(source + ": row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                      " cells, expected " + std::to_string(header.size()));
    }
    std::vector<double> values(columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const std::string cell = trim(cells[columns[j]]);
      if (!parse_number(cell, values[j]) || !std::isfinite(values[j])) {
        throw DataError(source + ": cannot parse '" + cell + "' at row " + std::to_string(line_no) + ", column \"" +
                        names[j] + "\"");
      }
    }
    rows.push_back(std::move(values));
  }
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), target_column, path.string());
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_csv(const Dataset& dataset, const std::string& target_name) {
  std::string out;
  for (const auto& name : dataset.feature_names) out += name + ",";
  out += target_name + "\n";
  for (Eigen::Index i = 0; i < dataset.rows(); ++i) {
    for (Eigen::Index j = 0; j < dataset.cols(); ++j) out += format_double(dataset.features(i, j)) + ",";
    out += format_double(dataset.targets(i)) + "\n";
  }
  return out;
}

double mean_of(const Eigen::Ref<const Vector>& values) {
  if (values.size() == 0) return 0.0;
  return values.sum() / static_cast<double>(values.size());
}

double population_std(const Eigen::Ref<const Vector>& values) {
  if (values.size() == 0) return 0.0;
  const double mu = mean_of(values);
  return std::sqrt((values.array() - mu).square().sum() / static_cast<double>(values.size()));
}

std::pair<Vector, StandardizationStats> standardize_targets(const Vector& targets) {
  if (targets.size() < 2) throw DataError("standardization needs at least 2 targets");
  StandardizationStats stats{mean_of(targets), population_std(targets)};
  if (!(stats.target_std > 0.0) || stats.target_std < 1e-300) {
    throw DegenerateTargetError("degenerate target: all values are equal");
  }
  Vector z = (targets.array() - stats.target_mean) / stats.target_std;
  return {std::move(z), stats};
}

ColumnStats column_stats(const Matrix& features) {
  if (features.rows() < 1) throw DataError("column statistics need at least 1 row");
  ColumnStats stats{Vector(features.cols()), Vector(features.cols())};
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    stats.mean(j) = mean_of(features.col(j));
    stats.std(j) = population_std(features.col(j));
  }
  return stats;
}

Matrix standardize_columns(const Matrix& features, const ColumnStats& stats) {
  Matrix out(features.rows(), features.cols());
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    const double scale = stats.std(j) > 0.0 ? stats.std(j) : 1.0;
    out.col(j) = (features.col(j).array() - stats.mean(j)) / scale;
  }
  return out;
}

}  // namespace egbm
