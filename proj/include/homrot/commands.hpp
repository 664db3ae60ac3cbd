#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "homrot/experiment.hpp"

namespace homrot {

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    unsigned threads = 1;
};

struct CommandReport {
    std::vector<std::filesystem::path> files;  // written, in order
    std::string summary;                       // human-readable, for stdout
};

/// dip_scan.csv, dip_fit.csv and simulate-dip.meta.jsonl.
CommandReport cmd_simulate_dip(const ExperimentConfig& config, const CommandOptions& options);

/// Dip files plus rotation_records.csv, rotation_shifts.csv, rotation_slope.csv.
CommandReport cmd_simulate_rotation(const ExperimentConfig& config, const CommandOptions& options);

/// classical_records.csv, classical_shifts.csv, classical_slope.csv.
CommandReport cmd_calibrate_classical(const ExperimentConfig& config,
                                      const CommandOptions& options);

/// satellite.csv with the per-revolution delay next to the quoted ~1e-16 s.
CommandReport cmd_satellite(const ExperimentConfig& config, const CommandOptions& options);

}  // namespace homrot
