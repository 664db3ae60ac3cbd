#pragma once

#include <string_view>

#include "homrot/experiment.hpp"

namespace homrot {

/// The order of magnitude quoted for the satellite delay, "~1e-16 s".
inline constexpr double kQuotedGravitomagneticDelay = 1e-16;

/// Rotating-fibre rig: 100 m of fibre wound 35 times on a 0.908 m loop (n = 1.45),
/// 642 nm calibration laser, 355 nm pump with 710 nm degenerate photons, 50 runs per
/// setting.
ExperimentConfig lab_preset();

/// Looks up a preset by name ("lab"). Throws DomainError for unknown names.
ExperimentConfig preset(std::string_view name);

/// Order-of-magnitude arrival-time difference revolutions * G J / (R c^4), prefactor 1.
double gravitomagnetic_delay(const SatelliteScenario& scenario);

/// Smallest number of revolutions whose accumulated delay reaches target_delay.
long long revolutions_needed(const SatelliteScenario& scenario, double target_delay);

}  // namespace homrot
