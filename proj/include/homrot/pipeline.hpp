#pragma once

#include <cstdint>
#include <vector>

#include "homrot/estimation.hpp"
#include "homrot/experiment.hpp"

namespace homrot {

struct DipScanResult {
    std::vector<CountsRecord> records;
    DipFitResult fit;
};

/// Static scan plus fit. Noiseless configs fit the expected counts.
DipScanResult run_dip_pipeline(const ExperimentConfig& config);

struct QuantumPipelineResult {
    DipScanResult dip;
    double operating_point = 0.0;   // m, steepest point used for the rotation runs
    std::vector<CountsRecord> records;
    std::vector<DelayEstimate> estimates;  // aligned with records
    std::size_t clipped = 0;               // estimates left out of the reduction
    std::vector<ReducedShift> shifts;      // m
    SlopeFit slope;                        // m per rate unit
};

/// Scan, fit, park at the steepest point, run the rotation protocol, invert every
/// record, reduce CW/ACW pairs and fit the shift against rotation rate.
QuantumPipelineResult run_quantum_pipeline(const ExperimentConfig& config, unsigned threads = 1);

struct PhaseRecord {
    double rotation_rate = 0.0;  // signed
    Direction direction = Direction::Clockwise;
    double phase = 0.0;          // rad, measured fringe shift
    double injected = 0.0;       // rad, noise-free value
    std::uint32_t setting = 0;
    std::uint32_t run = 0;
};

/// Fringe phase shifts of the classical Sagnac calibration: Sagnac phase plus a
/// sign-even term and Gaussian read-out noise.
std::vector<PhaseRecord> simulate_classical_phases(const ExperimentConfig& config);

struct ClassicalPipelineResult {
    std::vector<PhaseRecord> records;
    std::vector<ReducedShift> shifts;  // rad
    SlopeFit slope;                    // rad per rate unit
};

ClassicalPipelineResult run_classical_pipeline(const ExperimentConfig& config);

}  // namespace homrot
