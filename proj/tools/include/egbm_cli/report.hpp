#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "egbm/explain.hpp"
#include "egbm/local.hpp"
#include "egbm/trainer.hpp"

namespace egbm::cli {

inline constexpr const char* kToolVersion = "0.1.0";

nlohmann::json config_to_json(const TrainConfig& config);

nlohmann::json importance_to_json(const ImportanceReport& report, const std::vector<std::string>& names);
nlohmann::json convergence_to_json(const ConvergenceDiagnostic& diagnostic);
nlohmann::json history_to_json(const TrainingHistory& history);
nlohmann::json shape_to_json(const ShapeTable& table, const std::string& name);

// Global training report: importances, trajectories, losses, convergence.
nlohmann::json train_report(const EGBMModel& model, const TrainingHistory& history, const Dataset& dataset,
                            const ConvergenceDiagnostic& diagnostic, ImportanceScale scale);

// Plot-ready CSV matrices keyed by file suffix ("importance", "weights",
// "lasso_weights", "loss").
std::vector<std::pair<std::string, std::string>> history_csv(const TrainingHistory& history,
                                                             const ImportanceReport& importance,
                                                             const std::vector<std::string>& names);

// Deterministic JSON text (sorted keys, fixed indentation, trailing newline).
std::string dump(const nlohmann::json& doc);

std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
};

// Manifest JSON; the timestamp lives here and nowhere else.
nlohmann::json manifest_json(const RunManifest& manifest);

// Writes `<primary_output>.manifest.json`.
void write_manifest(const RunManifest& manifest, const std::filesystem::path& primary_output);

}  // namespace egbm::cli
