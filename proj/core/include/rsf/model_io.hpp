#pragma once

#include <filesystem>
#include <string>

#include "rsf/forest.hpp"

namespace rsf {

// Versioned JSON rendering of a trained model; stored exemplar values keep
// explicit kind tags so they round-trip exactly.
std::string model_to_json_string(const ForestModel& model);

void save_model(const ForestModel& model, const std::filesystem::path& path);

// Throws FormatError on unreadable/truncated files or unsupported versions.
ForestModel load_model(const std::filesystem::path& path);

}  // namespace rsf
