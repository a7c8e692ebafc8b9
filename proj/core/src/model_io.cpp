#include "egbm/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "egbm/error.hpp"

namespace egbm {

using nlohmann::json;

std::string serialize_model(const EGBMModel& model) {
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["task"] = to_string(model.task);
  doc["feature_names"] = model.feature_names;
  doc["target_stats"] = {{"mean", model.target_stats.target_mean}, {"std", model.target_stats.target_std}};
  doc["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  doc["intercept"] = model.intercept;
  doc["learning_rate"] = model.learning_rate;
  json gbms = json::array();
  for (const auto& gbm : model.gbms) {
    json stumps = json::array();
    for (const auto& s : gbm.stumps()) stumps.push_back({s.threshold, s.left_value, s.right_value});
    gbms.push_back(std::move(stumps));
  }
  doc["stumps"] = std::move(gbms);
  return doc.dump(1) + "\n";
}

EGBMModel deserialize_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError("malformed model file at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("format_version")) throw ModelFormatError("model file has no format_version");
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelFormatError("unsupported model format version " + std::to_string(version) + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");
    }
    EGBMModel model;
    model.task = task_from_string(doc.at("task").get<std::string>());
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    model.target_stats.target_mean = doc.at("target_stats").at("mean").get<double>();
    model.target_stats.target_std = doc.at("target_stats").at("std").get<double>();
    const auto weights = doc.at("weights").get<std::vector<double>>();
    model.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    model.intercept = doc.at("intercept").get<double>();
    model.learning_rate = doc.at("learning_rate").get<double>();
    const auto& gbms = doc.at("stumps");
    if (gbms.size() != weights.size() || weights.size() != model.feature_names.size()) {
      throw ModelFormatError("model file: feature_names, weights and stumps differ in length");
    }
    for (std::size_t k = 0; k < gbms.size(); ++k) {
      std::vector<Stump> stumps;
      for (const auto& s : gbms[k]) {
        const auto v = s.get<std::vector<double>>();
        if (v.size() != 3) throw ModelFormatError("model file: stump must be [threshold, left, right]");
        stumps.push_back({v[0], v[1], v[2]});
      }
      model.gbms.emplace_back(k, model.learning_rate, std::move(stumps));
    }
    return model;
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error("failed writing '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void save_model(const EGBMModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_model(model));
}

EGBMModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace egbm
