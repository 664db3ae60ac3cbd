#include "homrot/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "homrot/constants.hpp"
#include "homrot/errors.hpp"
#include "homrot/rng.hpp"

namespace homrot {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

std::int64_t poisson(std::mt19937_64& engine, double mean) {
    if (!(mean > 0.0)) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(engine);
}

}  // namespace

void SourceModel::validate() const {
    if (!(pair_rate >= 0.0)) throw DomainError("pair rate must be non-negative");
    if (!is_probability(transmission_a) || !is_probability(transmission_b)) {
        throw DomainError("arm transmissions must lie in [0, 1]");
    }
    if (!is_probability(visibility)) throw DomainError("visibility must lie in [0, 1]");
    if (!(center_wavelength > 0.0)) throw DomainError("centre wavelength must be positive");
    if (!(spectral_width > 0.0)) throw DomainError("spectral width must be positive");
}

JointSpectralAmplitude SourceModel::spectrum() const {
    const double center = constants::two_pi * constants::speed_of_light / center_wavelength;
    return JointSpectralAmplitude::separable_gaussian(center, spectral_width);
}

void DetectorModel::validate() const {
    if (!is_probability(efficiency_a) || !is_probability(efficiency_b)) {
        throw DomainError("detector efficiencies must lie in [0, 1]");
    }
    if (!(dark_rate >= 0.0)) throw DomainError("dark rate must be non-negative");
    if (!(coincidence_window > 0.0)) throw DomainError("coincidence window must be positive");
}

void RunPlan::validate() const {
    if (runs_per_setting < 1) throw DomainError("runs_per_setting must be >= 1");
    if (!(dwell_time > 0.0)) throw DomainError("dwell time must be positive");
    if (!(scan_dwell > 0.0)) throw DomainError("scan dwell must be positive");
    if (!(drift_std >= 0.0)) throw DomainError("drift must be non-negative");
    for (double m : rotation_magnitudes) {
        if (!(m >= 0.0)) throw DomainError("rotation magnitudes must be non-negative");
    }
}

CountRates expected_rates(double probability, const SourceModel& source,
                          const DetectorModel& detector) {
    const double p_eff = 0.5 * (1.0 - source.visibility * (1.0 - 2.0 * probability));
    CountRates r;
    r.true_coincidence = source.pair_rate * source.transmission_a * source.transmission_b *
                         detector.efficiency_a * detector.efficiency_b * p_eff;
    r.singles_a = source.pair_rate * source.transmission_a * detector.efficiency_a +
                  detector.dark_rate;
    r.singles_b = source.pair_rate * source.transmission_b * detector.efficiency_b +
                  detector.dark_rate;
    r.accidental = r.singles_a * r.singles_b * detector.coincidence_window;
    r.coincidence = r.true_coincidence + r.accidental;
    return r;
}

CountsRecord sample_counts(const CountRates& rates, double dwell, std::uint64_t stream) {
    if (!(dwell > 0.0)) throw DomainError("dwell must be positive");
    auto engine = make_engine(stream);
    CountsRecord rec;
    rec.dwell = dwell;
    rec.stream = stream;
    rec.expected_coincidences = rates.coincidence * dwell;
    rec.coincidences = poisson(engine, rec.expected_coincidences);
    rec.singles_a = poisson(engine, rates.singles_a * dwell);
    rec.singles_b = poisson(engine, rates.singles_b * dwell);
    return rec;
}

double dip_probability(const JointSpectralAmplitude& psi, double total_delay) {
    if (const auto* g = psi.as_separable_gaussian()) return gaussian_dip(total_delay, g->width);
    return coincidence_probability(psi, total_delay).probability;
}

namespace {

CountsRecord make_record(const CountRates& rates, double dwell, std::uint64_t stream,
                         bool noiseless) {
    if (!noiseless) return sample_counts(rates, dwell, stream);
    CountsRecord rec;
    rec.dwell = dwell;
    rec.stream = stream;
    rec.expected_coincidences = rates.coincidence * dwell;
    rec.coincidences = std::llround(rec.expected_coincidences);
    rec.singles_a = std::llround(rates.singles_a * dwell);
    rec.singles_b = std::llround(rates.singles_b * dwell);
    return rec;
}

}  // namespace

std::vector<CountsRecord> run_dip_scan(const RunPlan& plan, const Apparatus& apparatus,
                                       std::uint64_t seed) {
    plan.validate();
    apparatus.geometry.validate();
    apparatus.source.validate();
    apparatus.detector.validate();
    const auto psi = apparatus.source.spectrum();
    const RotationRate rate{plan.scan_rotation, apparatus.convention};
    const double sagnac =
        plan.sagnac_enabled ? sagnac_delay(apparatus.geometry.enclosed_area(), rate) : 0.0;
    const double n_g = apparatus.geometry.group_index;

    std::vector<CountsRecord> out;
    out.reserve(plan.scan_positions.size());
    for (std::size_t i = 0; i < plan.scan_positions.size(); ++i) {
        const double x = plan.scan_positions[i];
        const double p = dip_probability(psi, sagnac + stage_delay_from_position(x, n_g));
        const auto rates = expected_rates(p, apparatus.source, apparatus.detector);
        const auto stream = stream_id(seed, StreamDomain::DipScan, i, 0);
        auto rec = make_record(rates, plan.scan_dwell, stream, plan.noiseless);
        rec.stage_position = x;
        rec.rotation_rate = plan.scan_rotation;
        rec.injected_shift = dip_shift_stage(sagnac, n_g);
        rec.setting = static_cast<std::uint32_t>(i);
        out.push_back(rec);
    }
    return out;
}

std::vector<CountsRecord> run_rotation_protocol(const RunPlan& plan, const Apparatus& apparatus,
                                                std::uint64_t seed, unsigned threads) {
    plan.validate();
    apparatus.geometry.validate();
    apparatus.source.validate();
    apparatus.detector.validate();
    const auto psi = apparatus.source.spectrum();
    const double area = apparatus.geometry.enclosed_area();
    const double n_g = apparatus.geometry.group_index;
    const std::size_t runs = static_cast<std::size_t>(plan.runs_per_setting);
    const std::size_t settings = 2 * plan.rotation_magnitudes.size();
    std::vector<CountsRecord> out(settings * runs);

    auto run_setting = [&](std::size_t setting) {
        const double magnitude = plan.rotation_magnitudes[setting / 2];
        const bool clockwise = setting % 2 == 0;
        const double signed_rate = clockwise ? magnitude : -magnitude;
        const RotationRate rate{signed_rate, apparatus.convention};
        const double sagnac = plan.sagnac_enabled ? sagnac_delay(area, rate) : 0.0;
        const double even = plan.systematic_even_coefficient * magnitude * magnitude;
        const double drift_step = plan.drift_std * std::sqrt(plan.dwell_time);
        double drift = 0.0;
        for (std::size_t run = 0; run < runs; ++run) {
            if (drift_step > 0.0) {
                auto engine = make_engine(stream_id(seed, StreamDomain::RotationDrift, setting, run));
                drift += drift_step * std::normal_distribution<double>(0.0, 1.0)(engine);
            }
            const double total_delay =
                sagnac + stage_delay_from_position(plan.fixed_position + even + drift, n_g);
            const double p = dip_probability(psi, total_delay);
            const auto rates = expected_rates(p, apparatus.source, apparatus.detector);
            const auto stream = stream_id(seed, StreamDomain::RotationCounts, setting, run);
            auto rec = make_record(rates, plan.dwell_time, stream, plan.noiseless);
            rec.stage_position = plan.fixed_position;
            rec.rotation_rate = signed_rate;
            rec.direction = clockwise ? Direction::Clockwise : Direction::Anticlockwise;
            rec.injected_shift = dip_shift_stage(sagnac, n_g) + even + drift;
            rec.setting = static_cast<std::uint32_t>(setting);
            rec.run = static_cast<std::uint32_t>(run);
            out[setting * runs + run] = rec;
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(settings)));
    if (workers <= 1) {
        for (std::size_t s = 0; s < settings; ++s) run_setting(s);
        return out;
    }
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < settings; s += workers) run_setting(s);
            });
        }
    }
    return out;
}

}  // namespace homrot
