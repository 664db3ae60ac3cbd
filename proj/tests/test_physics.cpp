#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "homrot/constants.hpp"
#include "homrot/errors.hpp"
#include "homrot/physics.hpp"
#include "oracles.hpp"

using namespace homrot;

namespace {

constexpr double kC = 299792458.0;
constexpr double kQuotedArea = 22.7;

RotationRate paper_f(double v) { return {v, RateConvention::PaperF}; }
RotationRate physical(double v) { return {v, RateConvention::PhysicalHz}; }

PlatformGeometry lab_geometry() {
    PlatformGeometry g;
    g.loop_diameter = 0.908;
    g.turns = 35;
    g.fiber_length = 100.0;
    g.phase_index = 1.45;
    g.group_index = 1.45;
    return g;
}

}  // namespace

TEST_CASE("enclosed area") {
    CHECK(enclosed_area(35, 0.908) == doctest::Approx(35 * std::numbers::pi * 0.454 * 0.454));
    CHECK(enclosed_area(35, 0.908) == doctest::Approx(22.66).epsilon(5e-4));
    CHECK(std::abs(enclosed_area(35, 0.908) - 22.7) < 0.05);
    CHECK(enclosed_area(1, 2.0) == doctest::Approx(std::numbers::pi));
    CHECK(enclosed_area(0, 0.5) == 0.0);
    CHECK_THROWS_AS(enclosed_area(3, 0.0), DomainError);
    CHECK_THROWS_AS(enclosed_area(3, -1.0), DomainError);
    CHECK(lab_geometry().enclosed_area() == enclosed_area(35, 0.908));
}

TEST_CASE("geometry validation") {
    auto g = lab_geometry();
    CHECK_NOTHROW(g.validate());
    g.group_index = 0.9;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = lab_geometry();
    g.fiber_length = 0.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = lab_geometry();
    g.turns = 0;
    CHECK_NOTHROW(g.validate());
}

TEST_CASE("sagnac delay under both conventions") {
    // Literal 8 pi A f / c^2.
    const double literal = 8.0 * std::numbers::pi * kQuotedArea / (kC * kC);
    CHECK(literal == doctest::Approx(6.348e-15).epsilon(1e-4));
    CHECK(std::abs(sagnac_delay(kQuotedArea, physical(1.0)) - literal) < 1e-24);
    CHECK(std::abs(sagnac_delay(kQuotedArea, physical(1.0)) - 6.348e-15) < 1e-18);

    const double four_a = 4.0 * kQuotedArea / (kC * kC);
    CHECK(std::abs(sagnac_delay(kQuotedArea, paper_f(1.0)) - four_a) < 1e-27);
    CHECK(std::abs(sagnac_delay(kQuotedArea, paper_f(1.0)) - 1.0103e-15) < 1e-18);

    CHECK(sagnac_delay(kQuotedArea, paper_f(0.0)) == 0.0);
    CHECK(sagnac_delay(kQuotedArea, physical(0.0)) == 0.0);
    CHECK(sagnac_delay(kQuotedArea, paper_f(-1.3)) == -sagnac_delay(kQuotedArea, paper_f(1.3)));
}

TEST_CASE("sagnac delay is linear in area and rate, odd in rate") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> area(0.0, 100.0), rate(-5.0, 5.0), k(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double a = area(rng), f = rate(rng), s = k(rng);
        for (auto conv : {RateConvention::PaperF, RateConvention::PhysicalHz}) {
            const double base = sagnac_delay(a, {f, conv});
            CHECK(sagnac_delay(s * a, {f, conv}) == doctest::Approx(s * base).epsilon(1e-13));
            CHECK(sagnac_delay(a, {s * f, conv}) == doctest::Approx(s * base).epsilon(1e-13));
            CHECK(sagnac_delay(a, {-f, conv}) == -base);
        }
        CHECK(sagnac_delay(a, {f, RateConvention::PhysicalHz}) ==
              doctest::Approx(2.0 * std::numbers::pi * sagnac_delay(a, {f, RateConvention::PaperF}))
                  .epsilon(1e-13));
    }
}

TEST_CASE("classical phase shift") {
    const double dt = sagnac_delay(kQuotedArea, paper_f(1.0));
    const double phase = classical_phase_shift(dt, 642e-9);
    CHECK(phase == doctest::Approx(2.965).epsilon(5e-4));
    CHECK(std::abs(phase * constants::deg_per_rad - 169.9) <= 0.1);
    CHECK(std::abs(phase * constants::deg_per_rad - 170.0) < 0.5);
    CHECK(classical_phase_shift(0.0, 642e-9) == 0.0);
    CHECK(classical_phase_shift(2.0 * dt, 642e-9) == doctest::Approx(2.0 * phase));
    CHECK_THROWS_AS(classical_phase_shift(dt, 0.0), DomainError);
    CHECK_THROWS_AS(classical_phase_shift(dt, -1e-9), DomainError);
}

TEST_CASE("flight times") {
    const auto g = lab_geometry();
    const auto still = flight_times(g, paper_f(0.0), 0.0);
    CHECK(still.t_plus == still.t_minus);
    // L n_g / c for 100 m at 1.45.
    CHECK(still.t_plus == doctest::Approx(145.0 / kC).epsilon(1e-15));
    CHECK(still.t_plus == doctest::Approx(4.8367e-7).epsilon(1e-4));

    auto quoted = g;
    quoted.loop_diameter = 2.0 * std::sqrt(kQuotedArea / (35 * std::numbers::pi));
    const auto spinning = flight_times(quoted, paper_f(1.0), 3e-15);
    CHECK(std::abs(spinning.sagnac_delta - 1.0103e-15) < 1e-18);
    CHECK(spinning.t_plus - spinning.t_minus == doctest::Approx(spinning.sagnac_delta).epsilon(1e-6));
    CHECK(spinning.stage_delay == 3e-15);
    CHECK(spinning.total_delay() == spinning.sagnac_delta + 3e-15);

    const auto reversed = flight_times(g, paper_f(-1.0), 0.0);
    CHECK(reversed.sagnac_delta == -flight_times(g, paper_f(1.0), 0.0).sagnac_delta);

    auto with_air = g;
    with_air.free_space_path = 3.0;
    CHECK(flight_times(with_air, paper_f(0.0), 0.0).t_plus ==
          doctest::Approx(145.0 / kC + 3.0 / kC).epsilon(1e-15));
}

TEST_CASE("accumulated phase") {
    PathDelays d{2e-9, 1e-9, 5e-12, 1e-9};
    CHECK(accumulated_phase(3e15, 0.0, d) == doctest::Approx(3e15 * (2e-9 + 5e-12)));
    CHECK(accumulated_phase(3e15, 2e15, PathDelays{}) == 0.0);
    PathDelays sym{4e-7, 4e-7, 0.0, 0.0};
    CHECK(accumulated_phase(2.1e15, 2.4e15, sym) == doctest::Approx(4.5e15 * 4e-7));
}

TEST_CASE("closed-form dip") {
    const double sigma = 1.2e14;
    CHECK(gaussian_dip(0.0, sigma) == 0.0);
    CHECK(gaussian_dip(1.0 / sigma, sigma) == doctest::Approx(0.5 * (1.0 - std::exp(-1.0))));
    CHECK(gaussian_dip(1e-9, sigma) == doctest::Approx(0.5));
    const double dt = sagnac_delay(kQuotedArea, paper_f(2.0));
    CHECK(coincidence_probability_gaussian(-dt, paper_f(2.0), kQuotedArea, sigma) == 0.0);
    CHECK(coincidence_probability_gaussian(1.0, paper_f(2.0), kQuotedArea, sigma) == 0.5);
    CHECK_THROWS_AS(coincidence_probability_gaussian(0.0, paper_f(1.0), kQuotedArea, 0.0),
                    DomainError);
    CHECK_THROWS_AS(coincidence_probability_gaussian(0.0, paper_f(1.0), kQuotedArea, -1.0),
                    DomainError);
}

TEST_CASE("quadrature matches the closed form and an independent Simpson oracle") {
    const double mu = 2.0 * std::numbers::pi * kC / 710e-9;
    const double sigma = 1.2e14;
    const auto psi = JointSpectralAmplitude::separable_gaussian(mu, sigma);
    for (double st : {0.0, 0.1, 0.5, 1.0, 2.0, 3.5, 5.0}) {
        const double t = st / sigma;
        const auto q = coincidence_probability(psi, t);
        const double closed = gaussian_dip(t, sigma);
        const double simpson = oracle::separable_gaussian_probability(mu, sigma, t);
        CHECK(std::abs(q.probability - closed) <= 1e-6 * closed + 1e-12);
        CHECK(std::abs(q.probability - simpson) <= 1e-6 * simpson + 1e-12);
        CHECK(std::abs(q.overlap.imag()) <= 1e-9);
        CHECK(std::abs(q.norm - 1.0) <= 1e-9);
        CHECK(q.order > 0);
    }
}

TEST_CASE("distinguishable photons give one half") {
    const auto psi = JointSpectralAmplitude::separable_gaussian(2.6e15, 1.0e14);
    for (double st : {8.0, 10.0, 20.0, -15.0}) {
        CHECK(std::abs(coincidence_probability(psi, st / 1.0e14).probability - 0.5) <= 1e-9);
    }
}

TEST_CASE("exchange symmetry bounds") {
    const double sigma = 5e13;
    const auto sym = JointSpectralAmplitude::gaussian_pair(2.6e15, 2.6e15 + 3 * sigma, sigma,
                                                           ExchangeSymmetry::Symmetric);
    const auto anti = JointSpectralAmplitude::gaussian_pair(2.6e15, 2.6e15 + 3 * sigma, sigma,
                                                            ExchangeSymmetry::Antisymmetric);
    const auto sep = JointSpectralAmplitude::separable_gaussian(2.6e15, sigma);
    CHECK(std::abs(coincidence_probability(sym, 0.0).probability) <= 1e-9);
    CHECK(std::abs(coincidence_probability(sep, 0.0).probability) <= 1e-9);
    const auto a0 = coincidence_probability(anti, 0.0);
    CHECK(std::abs(a0.probability - 1.0) <= 1e-9);
    CHECK(std::abs(a0.overlap.imag()) <= 1e-9);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> delay(-6.0 / sigma, 6.0 / sigma);
    for (int i = 0; i < 40; ++i) {
        const double t = delay(rng);
        const double ps = coincidence_probability(sym, t).probability;
        const double pa = coincidence_probability(anti, t).probability;
        const double pp = coincidence_probability(sep, t).probability;
        CHECK(pp >= -1e-12);
        CHECK(pp <= 0.5 + 1e-12);
        CHECK(ps >= -1e-12);
        CHECK(ps <= 1.0 + 1e-12);
        CHECK(pa >= -1e-12);
        CHECK(pa <= 1.0 + 1e-12);
        CHECK(coincidence_probability(sym, -t).probability == doctest::Approx(ps).epsilon(1e-9));
    }
}

TEST_CASE("spectrum construction rules") {
    CHECK_THROWS_AS(JointSpectralAmplitude::separable_gaussian(1e15, 0.0), DomainError);
    CHECK_THROWS_AS(JointSpectralAmplitude::separable_gaussian(1e15, 2e14), DomainError);
    CHECK_NOTHROW(JointSpectralAmplitude::separable_gaussian(1e15, 1e14));
    CHECK_THROWS_AS(JointSpectralAmplitude::gaussian_pair(1e15, 1e15, 1e13,
                                                          ExchangeSymmetry::Antisymmetric),
                    DomainError);
}

TEST_CASE("unnormalized tables are rejected") {
    std::vector<double> grid{1.0e15, 1.1e15, 1.2e15};
    std::vector<std::complex<double>> amps(9, {1.0, 0.0});
    const auto raw = JointSpectralAmplitude::tabulated(TabulatedSpectrum(grid, amps));
    CHECK_THROWS_AS(coincidence_probability(raw, 0.0), DomainError);
    const auto ok = JointSpectralAmplitude::tabulated(TabulatedSpectrum::normalized(grid, amps));
    CHECK(std::abs(coincidence_probability(ok, 0.0).probability) <= 1e-12);
    CHECK_THROWS_AS(TabulatedSpectrum({1.0, 3.0, 4.0}, amps), DomainError);
}

TEST_CASE("normalization after construction") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t bins = 4 + trial;
        std::vector<double> grid(bins);
        std::vector<std::complex<double>> amps(bins * bins);
        for (std::size_t i = 0; i < bins; ++i) grid[i] = 2e15 + 1e12 * static_cast<double>(i);
        for (auto& a : amps) a = {n01(rng), n01(rng)};
        const auto t = TabulatedSpectrum::normalized(grid, amps);
        CHECK(std::abs(t.norm_squared() - 1.0) <= 1e-9);
        // Any amplitude gives a real overlap and a probability in [0, 1].
        const auto r = coincidence_probability(JointSpectralAmplitude::tabulated(t), 3e-13);
        CHECK(r.probability >= -1e-12);
        CHECK(r.probability <= 1.0 + 1e-12);
        CHECK(std::abs(r.overlap.imag()) <= 1e-9);
    }
}

TEST_CASE("stage shift and group index") {
    const double dt = sagnac_delay(kQuotedArea, paper_f(1.0));
    CHECK(dip_shift_stage(dt, 1.45) == doctest::Approx(208.9e-9).epsilon(3e-4));
    CHECK(dip_shift_stage(dt, 1.0) == kC * dt);
    CHECK_THROWS_AS(dip_shift_stage(dt, 0.5), DomainError);
    // (dx / dphi) n_g = lambda / 2 pi.
    const double dx = dip_shift_stage(dt, 1.45);
    const double dphi = classical_phase_shift(dt, 642e-9);
    CHECK(dx / dphi * 1.45 == doctest::Approx(642e-9 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    // Stage position and delay map back onto each other.
    CHECK(stage_delay_from_position(dip_shift_stage(dt, 1.45), 1.45) ==
          doctest::Approx(dt).epsilon(1e-14));
    CHECK(dip_width_stage(1.2e14, 1.45) ==
          doctest::Approx(kC / (std::sqrt(2.0) * 1.2e14 * 1.45)));
}
