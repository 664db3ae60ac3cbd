#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "homrot/experiment.hpp"

namespace homrot {

/// Reads the sectioned key-value format:
///
///     # comment
///     [geometry]
///     loop_diameter_m = 0.908
///     turns = 35
///
/// Keys carry their unit as a suffix. Values not given keep the lab preset defaults.
/// Unknown sections or keys, duplicates and malformed values raise ConfigError with the
/// offending line.
ExperimentConfig parse_config(std::string_view text, std::string_view origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical text for a configuration; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a over the canonical text, ignoring output_dir.
std::uint64_t config_hash(const ExperimentConfig& config);

std::string_view to_string(RateConvention c);
RateConvention parse_convention(std::string_view text);

}  // namespace homrot
