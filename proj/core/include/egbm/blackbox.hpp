#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace egbm {

// A model queried in batches: one prediction per input row.
class BlackBox {
 public:
  virtual ~BlackBox() = default;
  virtual Eigen::VectorXd query(const Eigen::MatrixXd& rows) = 0;
};

// Calls `query` and enforces the contract (length and finiteness). Throws
// AdapterError naming the offending row.
Eigen::VectorXd checked_query(BlackBox& blackbox, const Eigen::MatrixXd& rows);

class FunctionBlackBox final : public BlackBox {
 public:
  using Fn = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;
  explicit FunctionBlackBox(Fn fn) : fn_(std::move(fn)) {}
  Eigen::VectorXd query(const Eigen::MatrixXd& rows) override { return fn_(rows); }

 private:
  Fn fn_;
};

// Launches `command` through /bin/sh for every batch. The batch is written to
// its stdin as CSV with a header of `feature_names`; stdout must hold one
// decimal prediction per line.
class ProcessBlackBox final : public BlackBox {
 public:
  ProcessBlackBox(std::string command, std::vector<std::string> feature_names);
  Eigen::VectorXd query(const Eigen::MatrixXd& rows) override;

  [[nodiscard]] const std::string& command() const { return command_; }

 private:
  std::string command_;
  std::vector<std::string> feature_names_;
};

std::unique_ptr<BlackBox> external_process_adapter(const std::string& command,
                                                    std::vector<std::string> feature_names);

// y = c . x
std::unique_ptr<BlackBox> linear_blackbox(Eigen::VectorXd coefficients);

// Smooth probability of the "black" checker on a cells x cells board over the
// unit square: sigmoid(sharpness * sin(pi cells x1) * sin(pi cells x2)) for
// even-parity black cells, the complement for odd-parity black cells.
struct ChessboardProbability {
  int cells = 4;
  double sharpness = 10.0;
  bool black_is_even = true;

  [[nodiscard]] double operator()(double x1, double x2) const;
};

std::unique_ptr<BlackBox> chessboard_blackbox(ChessboardProbability board);

// Parses the subprocess protocol's output: one number per non-empty line.
// Throws AdapterError with the 1-based line number on a bad line.
std::vector<double> parse_prediction_lines(const std::string& text);

// Serializes a batch in the subprocess protocol's input format.
std::string batch_to_csv(const Eigen::MatrixXd& rows, const std::vector<std::string>& feature_names);

}  // namespace egbm
