#include "homrot/physics.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "homrot/constants.hpp"
#include "homrot/errors.hpp"
#include "homrot/quadrature.hpp"

namespace homrot {

using constants::speed_of_light;

void PlatformGeometry::validate() const {
    if (!(loop_diameter > 0.0)) throw DomainError("loop diameter must be positive");
    if (turns < 0) throw DomainError("number of turns must be non-negative");
    if (!(fiber_length > 0.0)) throw DomainError("fibre length must be positive");
    if (!(phase_index >= 1.0) || !(group_index >= 1.0)) {
        throw DomainError("refractive indices must be >= 1");
    }
    if (!(free_space_path >= 0.0)) throw DomainError("free-space path must be non-negative");
}

double PlatformGeometry::enclosed_area() const { return homrot::enclosed_area(turns, loop_diameter); }

double RotationRate::angular_rate() const {
    return convention == RateConvention::PhysicalHz ? constants::two_pi * value : value;
}

double enclosed_area(int turns, double loop_diameter) {
    if (!(loop_diameter > 0.0)) throw DomainError("loop diameter must be positive");
    if (turns < 0) throw DomainError("number of turns must be non-negative");
    const double r = 0.5 * loop_diameter;
    return static_cast<double>(turns) * constants::pi * r * r;
}

double sagnac_delay(double area, RotationRate rate) {
    return 4.0 * area * rate.angular_rate() / (speed_of_light * speed_of_light);
}

double classical_phase_shift(double delta_t, double wavelength) {
    if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
    return constants::two_pi * speed_of_light / wavelength * delta_t;
}

PathDelays flight_times(const PlatformGeometry& geometry, RotationRate rate, double stage_delay) {
    geometry.validate();
    const double common = geometry.fiber_length * geometry.group_index / speed_of_light +
                          geometry.free_space_path / speed_of_light;
    const double dt = sagnac_delay(geometry.enclosed_area(), rate);
    PathDelays d;
    d.t_plus = common + 0.5 * dt;
    d.t_minus = common - 0.5 * dt;
    d.stage_delay = stage_delay;
    d.sagnac_delta = dt;
    return d;
}

double accumulated_phase(double w1, double w2, const PathDelays& delays) {
    return w1 * (delays.t_plus + delays.stage_delay) + w2 * delays.t_minus;
}

namespace {

constexpr double kRelTolerance = 1e-8;
constexpr double kAbsTolerance = 1e-12;
constexpr double kNormTolerance = 1e-9;
constexpr int kStartOrder = 32;
constexpr int kMaxOrder = 4096;

struct QuadratureValue {
    std::complex<double> overlap;
    double norm;
};

// Tensor rule over [lo, hi]^2. The overlap integrand is conj(psi(w2, w1)) psi(w1, w2)
// exp(i (w2 - w1) T); frequencies are measured from the window centre so the phase
// keeps full precision.
QuadratureValue tensor_gauss(const JointSpectralAmplitude& psi, double total_delay, double lo,
                             double hi, int order) {
    const auto rule = gauss_legendre(order, lo, hi);
    const double ref = 0.5 * (lo + hi);
    const std::size_t n = rule.nodes.size();
    std::vector<std::complex<double>> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) values[i * n + j] = psi(rule.nodes[i], rule.nodes[j]);
    }
    std::vector<std::complex<double>> phase(n);
    for (std::size_t i = 0; i < n; ++i) {
        phase[i] = std::polar(1.0, (rule.nodes[i] - ref) * total_delay);
    }
    std::complex<double> overlap{0.0, 0.0};
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> row{0.0, 0.0};
        double row_norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto v = values[i * n + j];
            row += rule.weights[j] * std::conj(values[j * n + i]) * v * phase[j];
            row_norm += rule.weights[j] * std::norm(v);
        }
        overlap += rule.weights[i] * row * std::conj(phase[i]);
        norm += rule.weights[i] * row_norm;
    }
    return {overlap, norm};
}

CoincidenceResult tabulated_probability(const TabulatedSpectrum& t, double total_delay) {
    const double norm = t.norm_squared();
    if (std::abs(norm - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << "joint spectral amplitude is not normalized (norm " << norm << ")";
        throw DomainError(msg.str());
    }
    const std::size_t n = t.size();
    const auto grid = t.grid();
    const double ref = 0.5 * (grid.front() + grid.back());
    std::vector<std::complex<double>> phase(n);
    for (std::size_t i = 0; i < n; ++i) phase[i] = std::polar(1.0, (grid[i] - ref) * total_delay);
    std::complex<double> overlap{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> row{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            row += std::conj(t.amplitude(j, i)) * t.amplitude(i, j) * phase[j];
        }
        overlap += row * std::conj(phase[i]);
    }
    overlap *= t.step() * t.step();
    CoincidenceResult r;
    r.overlap = overlap;
    r.probability = 0.5 - 0.5 * overlap.real();
    r.norm = norm;
    return r;
}

}  // namespace

CoincidenceResult coincidence_probability(const JointSpectralAmplitude& psi, double total_delay) {
    if (const auto* t = std::get_if<TabulatedSpectrum>(&psi.variant())) {
        return tabulated_probability(*t, total_delay);
    }
    const auto [lo, hi] = psi.support();
    QuadratureValue prev = tensor_gauss(psi, total_delay, lo, hi, kStartOrder);
    double err = 0.0;
    for (int order = 2 * kStartOrder; order <= kMaxOrder; order *= 2) {
        const QuadratureValue cur = tensor_gauss(psi, total_delay, lo, hi, order);
        err = std::abs(cur.overlap - prev.overlap);
        if (err <= kRelTolerance * std::abs(cur.overlap) || err <= kAbsTolerance) {
            if (std::abs(cur.norm - 1.0) > kNormTolerance) {
                std::ostringstream msg;
                msg << "joint spectral amplitude is not normalized (norm " << cur.norm << ")";
                throw DomainError(msg.str());
            }
            CoincidenceResult r;
            r.overlap = cur.overlap;
            r.probability = 0.5 - 0.5 * cur.overlap.real();
            r.estimated_error = err;
            r.norm = cur.norm;
            r.order = order;
            return r;
        }
        prev = cur;
    }
    std::ostringstream msg;
    msg << "coincidence quadrature did not converge: order " << kMaxOrder << ", delay "
        << total_delay << " s, last error estimate " << err << ", overlap " << prev.overlap;
    throw NumericalError(msg.str());
}

double gaussian_dip(double total_delay, double width) {
    if (!(width > 0.0)) throw DomainError("spectral width must be positive");
    const double x = width * total_delay;
    return -0.5 * std::expm1(-x * x);
}

double coincidence_probability_gaussian(double stage_delay, RotationRate rate, double area,
                                        double width) {
    return gaussian_dip(sagnac_delay(area, rate) + stage_delay, width);
}

double dip_shift_stage(double delta_t, double group_index) {
    if (!(group_index >= 1.0)) throw DomainError("group index must be >= 1");
    return speed_of_light * delta_t / group_index;
}

double dip_width_stage(double spectral_width, double group_index) {
    if (!(spectral_width > 0.0)) throw DomainError("spectral width must be positive");
    if (!(group_index >= 1.0)) throw DomainError("group index must be >= 1");
    return speed_of_light / (std::sqrt(2.0) * spectral_width * group_index);
}

double stage_delay_from_position(double position, double group_index) {
    if (!(group_index >= 1.0)) throw DomainError("group index must be >= 1");
    return group_index * position / speed_of_light;
}

}  // namespace homrot
