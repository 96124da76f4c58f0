#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "fcagenda/trainer.hpp"

namespace fcagenda {

inline constexpr int kModelFormatVersion = 1;

// Canonical JSON: sorted keys, two-space indent, every real number as the
// shortest decimal string that reads back to the same double.
std::string serialize_model(const ModelState& state);

// Throws FormatError on malformed input, a version mismatch, or a violated
// model invariant.
ModelState parse_model(std::string_view text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
// Parses the file and rebuilds the basis lattices.
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace fcagenda
