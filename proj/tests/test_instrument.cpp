#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homrot/errors.hpp"
#include "homrot/instrument.hpp"
#include "homrot/rng.hpp"

using namespace homrot;

namespace {

Apparatus lab_apparatus() {
    Apparatus a;
    a.geometry.loop_diameter = 0.908;
    a.geometry.turns = 35;
    a.geometry.fiber_length = 100.0;
    a.geometry.phase_index = 1.45;
    a.geometry.group_index = 1.45;
    return a;
}

double ideal_baseline(const SourceModel& s, const DetectorModel& d) {
    return s.pair_rate * s.transmission_a * s.transmission_b * d.efficiency_a * d.efficiency_b * 0.5;
}

RunPlan scan_plan(double half_span, int points) {
    RunPlan plan;
    for (int i = 0; i < points; ++i) {
        plan.scan_positions.push_back(-half_span + 2.0 * half_span * i / (points - 1));
    }
    return plan;
}

}  // namespace

TEST_CASE("expected rates") {
    SourceModel s;
    DetectorModel d;
    d.dark_rate = 0.0;
    s.visibility = 1.0;
    const auto bottom = expected_rates(0.0, s, d);
    CHECK(bottom.true_coincidence == 0.0);
    CHECK(bottom.coincidence == bottom.accidental);
    CHECK(bottom.accidental == doctest::Approx(bottom.singles_a * bottom.singles_b * 3e-9));

    const auto flat = expected_rates(0.5, s, d);
    CHECK(flat.true_coincidence == doctest::Approx(ideal_baseline(s, d)));
    CHECK(flat.true_coincidence == doctest::Approx(1e5 * 0.1 * 0.1 * 0.5 * 0.5 * 0.5));

    // V = 0.9 leaves 10% of the baseline at the dip bottom: p_eff = 0.05.
    s.visibility = 0.9;
    const auto shallow = expected_rates(0.0, s, d);
    CHECK(shallow.true_coincidence ==
          doctest::Approx(s.pair_rate * 0.1 * 0.1 * 0.5 * 0.5 * 0.05));
    CHECK(shallow.true_coincidence == doctest::Approx(0.1 * ideal_baseline(s, d)));

    d.dark_rate = 200.0;
    const auto dark = expected_rates(0.5, s, d);
    CHECK(dark.singles_a == doctest::Approx(1e5 * 0.1 * 0.5 + 200.0));
}

TEST_CASE("Poisson sampling") {
    CountRates zero;
    const auto r0 = sample_counts(zero, 1.0, 42);
    CHECK(r0.coincidences == 0);
    CHECK(r0.singles_a == 0);

    CountRates big;
    big.coincidence = 1e4;
    int inside = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const auto r = sample_counts(big, 1.0, stream_id(seed, StreamDomain::DipScan, 0, 0));
        if (std::abs(static_cast<double>(r.coincidences) - 1e4) <= 5.0 * 100.0) ++inside;
    }
    CHECK(inside == 2000);

    const auto a = sample_counts(big, 2.0, 99);
    const auto b = sample_counts(big, 2.0, 99);
    CHECK(a.coincidences == b.coincidences);
    CHECK(a.singles_b == b.singles_b);
    CHECK(a.expected_coincidences == 2e4);
    CHECK_THROWS_AS(sample_counts(big, 0.0, 1), DomainError);
}

TEST_CASE("stream keys are distinct across domains, settings and runs") {
    std::vector<std::uint64_t> keys;
    for (auto dom : {StreamDomain::DipScan, StreamDomain::RotationCounts, StreamDomain::RotationDrift}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            for (std::uint64_t r = 0; r < 20; ++r) keys.push_back(stream_id(7, dom, s, r));
        }
    }
    std::sort(keys.begin(), keys.end());
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
    CHECK(stream_id(7, StreamDomain::DipScan, 1, 2) != stream_id(8, StreamDomain::DipScan, 1, 2));
}

TEST_CASE("dip scan") {
    auto app = lab_apparatus();
    const double width = dip_width_stage(app.source.spectral_width, app.geometry.group_index);
    auto plan = scan_plan(6.0 * width, 41);
    plan.noiseless = true;

    SUBCASE("static scan has its minimum at zero") {
        const auto recs = run_dip_scan(plan, app, 1);
        REQUIRE(recs.size() == 41);
        const auto it = std::min_element(recs.begin(), recs.end(), [](auto& a, auto& b) {
            return a.expected_coincidences < b.expected_coincidences;
        });
        CHECK(it->stage_position == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(recs.front().expected_coincidences ==
              doctest::Approx(recs.back().expected_coincidences).epsilon(1e-12));
    }

    SUBCASE("rotation displaces the minimum by the stage shift") {
        plan.scan_rotation = 4.0;
        const double shift = dip_shift_stage(
            sagnac_delay(app.geometry.enclosed_area(), {4.0, app.convention}), 1.45);
        // Sample finely around the expected minimum.
        plan.scan_positions.clear();
        for (int i = -200; i <= 200; ++i) plan.scan_positions.push_back(-shift + i * 1e-10);
        const auto recs = run_dip_scan(plan, app, 1);
        const auto it = std::min_element(recs.begin(), recs.end(), [](auto& a, auto& b) {
            return a.expected_coincidences < b.expected_coincidences;
        });
        CHECK(std::abs(it->stage_position + shift) <= 1e-10);
        CHECK(recs.front().injected_shift == doctest::Approx(shift));
    }

    SUBCASE("depth follows the visibility") {
        app.source.visibility = 0.8;
        app.detector.dark_rate = 0.0;
        const auto recs = run_dip_scan(plan, app, 1);
        const double base = recs.front().expected_coincidences;
        const double bottom = recs[20].expected_coincidences;
        const double acc = expected_rates(0.0, app.source, app.detector).accidental * plan.scan_dwell;
        CHECK((base - bottom) / (base - acc) == doctest::Approx(0.8).epsilon(1e-6));
    }
}

TEST_CASE("rotation protocol") {
    auto app = lab_apparatus();
    const double width = dip_width_stage(app.source.spectral_width, app.geometry.group_index);
    RunPlan plan;
    plan.rotation_magnitudes = {0.0, 1.0, 2.0};
    plan.runs_per_setting = 30;
    plan.fixed_position = -width;

    SUBCASE("layout and determinism across thread counts") {
        plan.drift_std = 1e-9;
        const auto one = run_rotation_protocol(plan, app, 123, 1);
        const auto four = run_rotation_protocol(plan, app, 123, 4);
        REQUIRE(one.size() == 3 * 2 * 30);
        for (std::size_t i = 0; i < one.size(); ++i) {
            CHECK(one[i].coincidences == four[i].coincidences);
            CHECK(one[i].injected_shift == four[i].injected_shift);
            CHECK(one[i].setting == i / 30);
            CHECK(one[i].run == i % 30);
        }
        CHECK(one[30].direction == Direction::Anticlockwise);
        CHECK(one[60].rotation_rate == 1.0);
        CHECK(one[90].rotation_rate == -1.0);
        const auto other = run_rotation_protocol(plan, app, 124, 1);
        bool differs = false;
        for (std::size_t i = 0; i < one.size(); ++i) differs |= one[i].coincidences != other[i].coincidences;
        CHECK(differs);
    }

    SUBCASE("even systematic alone gives identical CW and ACW expectations") {
        plan.sagnac_enabled = false;
        plan.systematic_even_coefficient = 5e-8;
        const auto recs = run_rotation_protocol(plan, app, 5, 1);
        for (std::size_t m = 0; m < 3; ++m) {
            const auto& cw = recs[(2 * m) * 30];
            const auto& acw = recs[(2 * m + 1) * 30];
            CHECK(cw.expected_coincidences == acw.expected_coincidences);
            CHECK(cw.injected_shift == acw.injected_shift);
        }
    }

    SUBCASE("Sagnac term flips sign, even term does not") {
        plan.systematic_even_coefficient = 3e-8;
        const auto recs = run_rotation_protocol(plan, app, 5, 1);
        const double odd = dip_shift_stage(
            sagnac_delay(app.geometry.enclosed_area(), {2.0, app.convention}), 1.45);
        CHECK(recs[4 * 30].injected_shift == doctest::Approx(odd + 4.0 * 3e-8));
        CHECK(recs[5 * 30].injected_shift == doctest::Approx(-odd + 4.0 * 3e-8));
    }

    SUBCASE("zero rotation sits on the static dip") {
        plan.noiseless = true;
        const auto recs = run_rotation_protocol(plan, app, 5, 1);
        RunPlan scan = plan;
        scan.scan_positions = {plan.fixed_position};
        const auto ref = run_dip_scan(scan, app, 5);
        CHECK(recs[0].expected_coincidences / recs[0].dwell ==
              doctest::Approx(ref[0].expected_coincidences / ref[0].dwell).epsilon(1e-14));
    }

    SUBCASE("mean counts converge to the expected rate") {
        plan.runs_per_setting = 400;
        const auto recs = run_rotation_protocol(plan, app, 77, 2);
        for (std::size_t s = 0; s < 6; ++s) {
            double sum = 0.0;
            for (int r = 0; r < 400; ++r) sum += static_cast<double>(recs[s * 400 + r].coincidences);
            const double mean = sum / 400.0;
            const double expected = recs[s * 400].expected_coincidences;
            CHECK(std::abs(mean - expected) <= 5.0 * std::sqrt(expected) / std::sqrt(400.0));
        }
    }

    SUBCASE("validation") {
        plan.runs_per_setting = 0;
        CHECK_THROWS_AS(run_rotation_protocol(plan, app, 1), DomainError);
        plan.runs_per_setting = 1;
        plan.dwell_time = 0.0;
        CHECK_THROWS_AS(run_rotation_protocol(plan, app, 1), DomainError);
    }
}
