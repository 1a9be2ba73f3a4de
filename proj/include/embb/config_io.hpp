#pragma once

#include <filesystem>
#include <string>

#include "embb/model.hpp"

namespace embb {

// JSON config files. Keys mirror SystemConfig fields; power and noise density
// are written in dBm / dBm/Hz as in the published parameter table. Missing
// keys keep their defaults, unknown keys are rejected.
SystemConfig config_from_json_text(const std::string& text);
SystemConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const SystemConfig& config);

}  // namespace embb
