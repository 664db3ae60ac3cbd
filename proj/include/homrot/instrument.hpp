#pragma once

#include <cstdint>
#include <vector>

#include "homrot/physics.hpp"

namespace homrot {

struct SourceModel {
    double pair_rate = 1e5;              // pairs/s at the crystal
    double transmission_a = 0.1;         // clockwise arm
    double transmission_b = 0.1;         // anticlockwise arm
    double center_wavelength = 710e-9;   // m, degenerate daughters of the 355 nm pump
    double spectral_width = 1.2e14;      // rad/s, std of |g|^2
    double visibility = 0.95;            // mode-overlap visibility V

    void validate() const;
    bool operator==(const SourceModel&) const = default;
    /// Separable Gaussian amplitude centred on 2 pi c / center_wavelength.
    JointSpectralAmplitude spectrum() const;
};

struct DetectorModel {
    double efficiency_a = 0.5;
    double efficiency_b = 0.5;
    double dark_rate = 100.0;            // counts/s per detector
    double coincidence_window = 3e-9;    // s

    void validate() const;
    bool operator==(const DetectorModel&) const = default;
};

struct CountRates {
    double coincidence = 0.0;       // true + accidental, 1/s
    double true_coincidence = 0.0;
    double accidental = 0.0;
    double singles_a = 0.0;
    double singles_b = 0.0;
};

/// True coincidences pair_rate T_a T_b eta_a eta_b p_eff with p_eff = (1 - V (1 - 2p)) / 2,
/// plus accidentals S_a S_b window.
CountRates expected_rates(double probability, const SourceModel& source,
                          const DetectorModel& detector);

enum class Direction { None, Clockwise, Anticlockwise };

struct CountsRecord {
    double stage_position = 0.0;   // m
    double rotation_rate = 0.0;    // signed, user units
    Direction direction = Direction::None;
    double dwell = 0.0;            // s
    std::int64_t coincidences = 0;
    std::int64_t singles_a = 0;
    std::int64_t singles_b = 0;
    double expected_coincidences = 0.0;
    double injected_shift = 0.0;   // m, stage-equivalent delay applied on top of the stage
    std::uint32_t setting = 0;
    std::uint32_t run = 0;
    std::uint64_t stream = 0;
};

/// Poisson draws with means rate * dwell. Deterministic in `stream`.
CountsRecord sample_counts(const CountRates& rates, double dwell, std::uint64_t stream);

struct RunPlan {
    std::vector<double> rotation_magnitudes;  // user units, >= 0
    int runs_per_setting = 50;
    double dwell_time = 1.0;                  // s, rotation protocol
    double fixed_position = 0.0;              // m
    std::vector<double> scan_positions;       // m
    double scan_dwell = 10.0;                 // s
    double scan_rotation = 0.0;               // user units
    double systematic_even_coefficient = 0.0; // m per (rate unit)^2, stage-equivalent
    double drift_std = 0.0;                   // m per sqrt(s), random walk
    bool sagnac_enabled = true;
    bool noiseless = false;                   // counts set to their means

    void validate() const;
    bool operator==(const RunPlan&) const = default;
};

struct Apparatus {
    PlatformGeometry geometry;
    SourceModel source;
    DetectorModel detector;
    RateConvention convention = RateConvention::PaperF;

    bool operator==(const Apparatus&) const = default;
};

/// Coincidence probability at total delay T for the source spectrum. Separable
/// Gaussians use the closed form; anything else goes through the quadrature.
double dip_probability(const JointSpectralAmplitude& psi, double total_delay);

/// One record per scan position. Uses plan.scan_dwell and plan.scan_rotation.
std::vector<CountsRecord> run_dip_scan(const RunPlan& plan, const Apparatus& apparatus,
                                       std::uint64_t seed);

/// Records at plan.fixed_position for every magnitude, both directions and
/// runs_per_setting runs, ordered by (magnitude, direction, run). Setting index is
/// 2 * magnitude_index + (0 for clockwise, 1 for anticlockwise). Output does not
/// depend on `threads`.
std::vector<CountsRecord> run_rotation_protocol(const RunPlan& plan, const Apparatus& apparatus,
                                                std::uint64_t seed, unsigned threads = 1);

}  // namespace homrot
