#include "homrot/experiment.hpp"

#include "homrot/errors.hpp"

namespace homrot {

std::vector<double> ScanSettings::positions() const {
    if (points < 2) throw DomainError("scan needs at least two points");
    if (!(half_span > 0.0)) throw DomainError("scan half span must be positive");
    std::vector<double> xs(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        xs[static_cast<std::size_t>(i)] = -half_span + 2.0 * half_span * i / (points - 1);
    }
    return xs;
}

void SatelliteScenario::validate() const {
    if (!(orbital_radius > 0.0)) throw DomainError("orbital radius must be positive");
    if (revolutions < 1) throw DomainError("revolutions must be >= 1");
    if (!(gravitational_constant > 0.0)) throw DomainError("G must be positive");
}

RunPlan ExperimentConfig::run_plan() const {
    RunPlan plan;
    plan.rotation_magnitudes = rotation.magnitudes;
    plan.runs_per_setting = rotation.runs_per_setting;
    plan.dwell_time = rotation.dwell;
    plan.scan_positions = scan.positions();
    plan.scan_dwell = scan.dwell;
    plan.scan_rotation = scan.rotation;
    plan.systematic_even_coefficient = rotation.even_coefficient;
    plan.drift_std = rotation.drift;
    plan.sagnac_enabled = rotation.sagnac_enabled;
    plan.noiseless = rotation.noiseless;
    return plan;
}

void ExperimentConfig::validate() const {
    apparatus.geometry.validate();
    apparatus.source.validate();
    apparatus.detector.validate();
    (void)apparatus.source.spectrum();
    run_plan().validate();
    satellite.validate();
    if (!(classical.wavelength > 0.0)) throw DomainError("classical wavelength must be positive");
    if (!(classical.phase_noise >= 0.0)) throw DomainError("phase noise must be non-negative");
    if (classical.runs_per_setting < 1) throw DomainError("classical runs_per_setting must be >= 1");
    for (double m : classical.magnitudes) {
        if (!(m >= 0.0)) throw DomainError("classical magnitudes must be non-negative");
    }
    if (!(pump_wavelength > 0.0)) throw DomainError("pump wavelength must be positive");
}

}  // namespace homrot
