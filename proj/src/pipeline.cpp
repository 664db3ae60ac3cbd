#include "homrot/pipeline.hpp"

#include <cmath>
#include <random>

#include "homrot/rng.hpp"

namespace homrot {
namespace {

SlopeFit fit_reduced(const std::vector<ReducedShift>& shifts, Reduction mode) {
    std::vector<double> x, y, s;
    for (const auto& r : shifts) {
        x.push_back(r.magnitude);
        y.push_back(reduced_value(r, mode));
        s.push_back(r.std);
    }
    return fit_linear(x, y, s);
}

}  // namespace

DipScanResult run_dip_pipeline(const ExperimentConfig& config) {
    config.validate();
    DipScanResult out;
    out.records = run_dip_scan(config.run_plan(), config.apparatus, config.seed);
    DipFitOptions opts;
    opts.use_expected_counts = config.rotation.noiseless;
    out.fit = fit_dip(out.records, opts);
    return out;
}

QuantumPipelineResult run_quantum_pipeline(const ExperimentConfig& config, unsigned threads) {
    QuantumPipelineResult out;
    out.dip = run_dip_pipeline(config);
    out.operating_point = steepest_point(out.dip.fit, config.rotation.steepest_side);

    RunPlan plan = config.run_plan();
    plan.fixed_position = out.operating_point;
    out.records = run_rotation_protocol(plan, config.apparatus, config.seed, threads);

    std::vector<ShiftSample> samples;
    samples.reserve(out.records.size());
    out.estimates.reserve(out.records.size());
    for (const auto& rec : out.records) {
        const auto est = config.rotation.noiseless ? mle_delay_expected(rec, out.dip.fit)
                                                   : mle_delay(rec, out.dip.fit);
        out.estimates.push_back(est);
        if (est.status != EstimateStatus::Ok) {
            ++out.clipped;
            continue;
        }
        samples.push_back({std::abs(rec.rotation_rate), rec.direction, est.delay, est.std});
    }
    out.shifts = cw_acw_reduce(samples);
    out.slope = fit_reduced(out.shifts, config.rotation.reduction);
    return out;
}

std::vector<PhaseRecord> simulate_classical_phases(const ExperimentConfig& config) {
    config.validate();
    const auto& cl = config.classical;
    const double area = config.apparatus.geometry.enclosed_area();
    const bool noisy = !cl.noiseless && cl.phase_noise > 0.0;
    std::vector<PhaseRecord> out;
    out.reserve(2 * cl.magnitudes.size() * static_cast<std::size_t>(cl.runs_per_setting));
    for (std::size_t m = 0; m < cl.magnitudes.size(); ++m) {
        const double magnitude = cl.magnitudes[m];
        for (int dir = 0; dir < 2; ++dir) {
            const std::size_t setting = 2 * m + static_cast<std::size_t>(dir);
            const double signed_rate = dir == 0 ? magnitude : -magnitude;
            const RotationRate rate{signed_rate, config.apparatus.convention};
            const double truth = classical_phase_shift(sagnac_delay(area, rate), cl.wavelength) +
                                 cl.even_coefficient * magnitude * magnitude;
            for (int run = 0; run < cl.runs_per_setting; ++run) {
                PhaseRecord rec;
                rec.rotation_rate = signed_rate;
                rec.direction = dir == 0 ? Direction::Clockwise : Direction::Anticlockwise;
                rec.injected = truth;
                rec.phase = truth;
                if (noisy) {
                    auto engine = make_engine(stream_id(config.seed, StreamDomain::ClassicalPhase,
                                                        setting, static_cast<std::uint64_t>(run)));
                    rec.phase += cl.phase_noise * std::normal_distribution<double>(0.0, 1.0)(engine);
                }
                rec.setting = static_cast<std::uint32_t>(setting);
                rec.run = static_cast<std::uint32_t>(run);
                out.push_back(rec);
            }
        }
    }
    return out;
}

ClassicalPipelineResult run_classical_pipeline(const ExperimentConfig& config) {
    ClassicalPipelineResult out;
    out.records = simulate_classical_phases(config);
    const auto& cl = config.classical;
    // Without read-out noise every point carries the same unit weight.
    const double per_run_std = (!cl.noiseless && cl.phase_noise > 0.0) ? cl.phase_noise : 1.0;
    std::vector<ShiftSample> samples;
    samples.reserve(out.records.size());
    for (const auto& r : out.records) {
        samples.push_back({std::abs(r.rotation_rate), r.direction, r.phase, per_run_std});
    }
    out.shifts = cw_acw_reduce(samples);
    out.slope = fit_reduced(out.shifts, cl.reduction);
    return out;
}

}  // namespace homrot
