#pragma once

#include <filesystem>
#include <string>

#include "egbm/trainer.hpp"

namespace egbm {

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const EGBMModel& model);
// Throws ModelFormatError on a version mismatch or malformed content.
EGBMModel deserialize_model(const std::string& text);

void save_model(const EGBMModel& model, const std::filesystem::path& path);
EGBMModel load_model(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace egbm
