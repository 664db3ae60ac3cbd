#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homrot/estimation.hpp"
#include "homrot/instrument.hpp"

namespace homrot {

struct ScanSettings {
    int points = 41;
    double half_span = 7.5e-6;   // m, scan covers [-half_span, +half_span]
    double dwell = 10.0;         // s per point
    double rotation = 0.0;       // user rate units

    std::vector<double> positions() const;
    bool operator==(const ScanSettings&) const = default;
};

struct RotationSettings {
    std::vector<double> magnitudes{0.0, 0.5, 1.0, 1.5, 2.0};
    int runs_per_setting = 50;
    double dwell = 1.0;                 // s
    double even_coefficient = 2e-8;     // m per rate unit^2, centrifugal deformation
    double drift = 0.0;                 // m per sqrt(s)
    DipSide steepest_side = DipSide::Negative;
    Reduction reduction = Reduction::HalfDifference;
    bool sagnac_enabled = true;
    bool noiseless = false;

    bool operator==(const RotationSettings&) const = default;
};

struct ClassicalSettings {
    double wavelength = 642e-9;         // m
    double phase_noise = 0.1;           // rad per run
    double even_coefficient = 0.05;     // rad per rate unit^2
    std::vector<double> magnitudes{0.0, 0.5, 1.0, 1.5, 2.0};
    int runs_per_setting = 50;
    Reduction reduction = Reduction::HalfDifference;
    bool noiseless = false;

    bool operator==(const ClassicalSettings&) const = default;
};

struct SatelliteScenario {
    double angular_momentum = 5.86e33;          // kg m^2/s, Earth
    double orbital_radius = 7.0e6;              // m
    double gravitational_constant = 6.674e-11;  // m^3/(kg s^2)
    int revolutions = 1;

    void validate() const;
    bool operator==(const SatelliteScenario&) const = default;
};

enum class AngleUnit { Degrees, Radians };

/// Everything a CLI run needs. Parsed from / serialized to the key-value config format.
struct ExperimentConfig {
    std::string name = "lab";
    Apparatus apparatus;
    double pump_wavelength = 355e-9;  // m
    ScanSettings scan;
    RotationSettings rotation;
    ClassicalSettings classical;
    SatelliteScenario satellite;
    std::uint64_t seed = 20190521;
    AngleUnit angles = AngleUnit::Degrees;
    std::string output_dir = ".";

    /// Instrument run plan for these settings. The fixed position is left at zero; the
    /// quantum pipeline sets it to the fitted steepest point.
    RunPlan run_plan() const;
    void validate() const;
    bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace homrot
