#include "homrot/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homrot/constants.hpp"
#include "homrot/errors.hpp"

namespace homrot {

ExperimentConfig lab_preset() {
    ExperimentConfig cfg;
    cfg.name = "lab";
    cfg.apparatus.geometry.loop_diameter = 0.908;
    cfg.apparatus.geometry.turns = 35;
    cfg.apparatus.geometry.fiber_length = 100.0;
    cfg.apparatus.geometry.phase_index = 1.45;
    cfg.apparatus.geometry.group_index = 1.45;
    cfg.apparatus.geometry.free_space_path = 0.0;
    cfg.apparatus.convention = RateConvention::PaperF;
    cfg.pump_wavelength = 355e-9;
    cfg.apparatus.source.center_wavelength = 2.0 * cfg.pump_wavelength;
    cfg.classical.wavelength = 642e-9;
    cfg.rotation.runs_per_setting = 50;
    cfg.classical.runs_per_setting = 50;
    return cfg;
}

ExperimentConfig preset(std::string_view name) {
    if (name == "lab") return lab_preset();
    throw DomainError("unknown preset '" + std::string(name) + "'");
}

double gravitomagnetic_delay(const SatelliteScenario& scenario) {
    scenario.validate();
    const double c2 = constants::speed_of_light * constants::speed_of_light;
    return scenario.revolutions * scenario.gravitational_constant * scenario.angular_momentum /
           (scenario.orbital_radius * c2 * c2);
}

long long revolutions_needed(const SatelliteScenario& scenario, double target_delay) {
    if (!(target_delay > 0.0)) throw DomainError("target delay must be positive");
    SatelliteScenario single = scenario;
    single.revolutions = 1;
    const double per_rev = gravitomagnetic_delay(single);
    if (!(per_rev > 0.0)) throw DomainError("per-revolution delay must be positive");
    const double ratio = target_delay / per_rev;
    auto n = static_cast<long long>(std::ceil(ratio));
    // Absorb rounding in the division, e.g. 10 * d / d landing just above 10.
    if (n > 1 && static_cast<double>(n - 1) >= ratio * (1.0 - 1e-12)) --n;
    return std::max(n, 1LL);
}

}  // namespace homrot
