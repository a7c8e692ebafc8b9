#include "egbm_cli/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>

#include "egbm/dataset.hpp"
#include "egbm/error.hpp"
#include "egbm/model_io.hpp"

namespace egbm::cli {

using nlohmann::json;

namespace {

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

std::string matrix_csv(const Eigen::MatrixXd& m, const std::vector<std::string>& names, const std::string& index) {
  std::string out = index;
  for (const auto& n : names) out += "," + n;
  out += "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += std::to_string(i + 1);
    for (Eigen::Index j = 0; j < m.cols(); ++j) out += "," + format_double(m(i, j));
    out += "\n";
  }
  return out;
}

}  // namespace

json config_to_json(const TrainConfig& c) {
  json lasso;
  if (c.lasso.cross_validate) {
    lasso = {{"mode", "cv"}, {"folds", c.lasso.folds}, {"grid_size", c.lasso.grid_size}, {"grid_ratio", c.lasso.grid_ratio}};
  } else {
    lasso = {{"mode", "fixed"}, {"lambda", c.lasso.lambda}};
  }
  return {{"iterations", c.iterations},
          {"alpha", c.alpha},
          {"learning_rate", c.learning_rate},
          {"inner_steps", c.inner_steps},
          {"lasso", lasso},
          {"task", to_string(c.task)},
          {"pretrain_steps", c.pretrain_steps},
          {"seed", c.seed},
          {"zero_initial_residuals", c.zero_initial_residuals},
          {"double_weight_targets", c.double_weight_targets},
          {"lasso_target", c.lasso_target == LassoTarget::kTargets ? "targets" : "previous_residuals"}};
}

json importance_to_json(const ImportanceReport& report, const std::vector<std::string>& names) {
  json ranking = json::array();
  for (const auto k : report.ranking) ranking.push_back(names.at(k));
  return {{"importance", vector_json(report.importance)}, {"raw_weight", vector_json(report.raw_weight)},
          {"ranking", ranking}};
}

json convergence_to_json(const ConvergenceDiagnostic& d) {
  return {{"window", d.window}, {"threshold", d.threshold}, {"relative_drift", d.relative_drift},
          {"stabilized", d.stabilized}};
}

json history_to_json(const TrainingHistory& h) {
  return {{"weight_trajectory", matrix_json(h.weight_trajectory)},
          {"lasso_weight_trajectory", matrix_json(h.lasso_weights)},
          {"training_loss", vector_json(h.training_loss)},
          {"lambda", h.lambda_used}};
}

json shape_to_json(const ShapeTable& t, const std::string& name) {
  return {{"feature", name}, {"grid", vector_json(t.grid)}, {"contribution", vector_json(t.contribution)},
          {"scaled", t.scaled}, {"constant", t.constant}};
}

json train_report(const EGBMModel& model, const TrainingHistory& history, const Dataset& dataset,
                  const ConvergenceDiagnostic& diagnostic, ImportanceScale scale) {
  const ImportanceReport importance = feature_importances(model, dataset, scale);
  json fit;
  const Eigen::VectorXd predicted = model_predict(model, dataset.features);
  if (model.task == Task::kRegression) {
    fit["r2"] = r_squared(dataset.targets, predicted);
  } else {
    const Eigen::VectorXd labels = binary_labels(dataset.targets);
    Eigen::Index correct = 0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) correct += ((predicted(i) > 0.5) == (labels(i) > 0.5));
    fit["accuracy"] = static_cast<double>(correct) / static_cast<double>(labels.size());
  }
  return {{"task", to_string(model.task)},
          {"feature_names", model.feature_names},
          {"importance", importance_to_json(importance, model.feature_names)},
          {"importance_scale", scale == ImportanceScale::kShapeValues ? "shape" : "feature"},
          {"intercept", model.intercept},
          {"convergence", convergence_to_json(diagnostic)},
          {"history", history_to_json(history)},
          {"fit", fit}};
}

std::vector<std::pair<std::string, std::string>> history_csv(const TrainingHistory& history,
                                                             const ImportanceReport& importance,
                                                             const std::vector<std::string>& names) {
  std::string imp = "feature,importance,raw_weight\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    imp += names[k] + "," + format_double(importance.importance(i)) + "," + format_double(importance.raw_weight(i)) + "\n";
  }
  std::string loss = "iteration,loss\n";
  for (Eigen::Index s = 0; s < history.training_loss.size(); ++s) {
    loss += std::to_string(s + 1) + "," + format_double(history.training_loss(s)) + "\n";
  }
  return {{"importance", imp},
          {"weights", matrix_csv(history.weight_trajectory, names, "iteration")},
          {"lasso_weights", matrix_csv(history.lasso_weights, names, "iteration")},
          {"loss", loss}};
}

std::string dump(const json& doc) { return doc.dump(1) + "\n"; }

std::string sha256_file(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed for '" + path.string() + "'");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

json manifest_json(const RunManifest& m) {
  json inputs = json::array();
  for (const auto& p : m.inputs) inputs.push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});
  json outputs = json::array();
  for (const auto& p : m.outputs) outputs.push_back(p.string());
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return {{"tool", "egbm"}, {"version", kToolVersion}, {"command", m.command}, {"config", m.config},
          {"seed", m.seed},  {"inputs", inputs},        {"outputs", outputs},    {"created", stamp}};
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& primary_output) {
  std::filesystem::path path = primary_output;
  path += ".manifest.json";
  write_file_atomic(path, dump(manifest_json(manifest)));
}

}  // namespace egbm::cli
