#include "homrot/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "homrot/errors.hpp"

namespace homrot {
namespace {

constexpr double kMinCenterToWidth = 10.0;
constexpr double kSupportWidths = 8.0;

double gaussian_mode(double w, double center, double width) {
    const double d = w - center;
    const double norm = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    return norm * std::exp(-d * d / (4.0 * width * width));
}

void check_width(double center, double width) {
    if (!(width > 0.0)) throw DomainError("spectral width must be positive");
    if (!(center >= kMinCenterToWidth * width)) {
        throw DomainError("spectral centre must be at least 10 widths (centre " +
                          std::to_string(center) + ", width " + std::to_string(width) + ")");
    }
}

}  // namespace

TabulatedSpectrum::TabulatedSpectrum(std::vector<double> grid,
                                     std::vector<std::complex<double>> amplitudes)
    : grid_(std::move(grid)), amplitudes_(std::move(amplitudes)) {
    if (grid_.empty()) throw DomainError("tabulated spectrum needs a non-empty grid");
    if (amplitudes_.size() != grid_.size() * grid_.size()) {
        throw DomainError("tabulated spectrum: amplitude count must be grid size squared");
    }
    if (grid_.size() == 1) {
        throw DomainError("tabulated spectrum needs at least two grid nodes");
    }
    step_ = grid_[1] - grid_[0];
    if (!(step_ > 0.0)) throw DomainError("tabulated spectrum grid must be increasing");
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double d = grid_[i] - grid_[i - 1];
        if (std::abs(d - step_) > 1e-9 * step_) {
            throw DomainError("tabulated spectrum grid must be uniform");
        }
    }
}

TabulatedSpectrum TabulatedSpectrum::normalized(std::vector<double> grid,
                                                std::vector<std::complex<double>> amplitudes) {
    TabulatedSpectrum t(std::move(grid), std::move(amplitudes));
    const double n2 = t.norm_squared();
    if (!(n2 > 0.0)) throw DomainError("tabulated spectrum is identically zero");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : t.amplitudes_) a *= scale;
    return t;
}

double TabulatedSpectrum::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s * step_ * step_;
}

JointSpectralAmplitude JointSpectralAmplitude::separable_gaussian(double center, double width) {
    check_width(center, width);
    return JointSpectralAmplitude(SeparableGaussian{center, width});
}

JointSpectralAmplitude JointSpectralAmplitude::gaussian_pair(double center_a, double center_b,
                                                             double width,
                                                             ExchangeSymmetry symmetry) {
    check_width(center_a, width);
    check_width(center_b, width);
    if (symmetry == ExchangeSymmetry::Antisymmetric && center_a == center_b) {
        throw DomainError("antisymmetric Gaussian pair needs distinct centres");
    }
    return JointSpectralAmplitude(GaussianPair{center_a, center_b, width, symmetry});
}

JointSpectralAmplitude JointSpectralAmplitude::tabulated(TabulatedSpectrum table) {
    return JointSpectralAmplitude(std::move(table));
}

std::complex<double> JointSpectralAmplitude::operator()(double w1, double w2) const {
    if (const auto* g = std::get_if<SeparableGaussian>(&value_)) {
        return gaussian_mode(w1, g->center, g->width) * gaussian_mode(w2, g->center, g->width);
    }
    if (const auto* p = std::get_if<GaussianPair>(&value_)) {
        // <g_a|g_b> = exp(-(mu_a - mu_b)^2 / (8 sigma^2))
        const double d = p->center_a - p->center_b;
        const double overlap = std::exp(-d * d / (8.0 * p->width * p->width));
        const double sign = p->symmetry == ExchangeSymmetry::Symmetric ? 1.0 : -1.0;
        const double norm = 1.0 / std::sqrt(2.0 + sign * 2.0 * overlap * overlap);
        const double ab = gaussian_mode(w1, p->center_a, p->width) *
                          gaussian_mode(w2, p->center_b, p->width);
        const double ba = gaussian_mode(w1, p->center_b, p->width) *
                          gaussian_mode(w2, p->center_a, p->width);
        return norm * (ab + sign * ba);
    }
    throw DomainError("point evaluation is not defined for tabulated spectra");
}

std::pair<double, double> JointSpectralAmplitude::support() const {
    if (const auto* g = std::get_if<SeparableGaussian>(&value_)) {
        return {std::max(0.0, g->center - kSupportWidths * g->width),
                g->center + kSupportWidths * g->width};
    }
    if (const auto* p = std::get_if<GaussianPair>(&value_)) {
        const double lo = std::min(p->center_a, p->center_b);
        const double hi = std::max(p->center_a, p->center_b);
        return {std::max(0.0, lo - kSupportWidths * p->width), hi + kSupportWidths * p->width};
    }
    const auto& t = std::get<TabulatedSpectrum>(value_);
    return {t.grid().front(), t.grid().back()};
}

TabulatedSpectrum tabulate(const JointSpectralAmplitude& psi, std::size_t bins, double lo,
                           double hi) {
    if (bins < 2 || !(hi > lo)) throw DomainError("tabulate: need >= 2 bins over a valid range");
    const double h = (hi - lo) / static_cast<double>(bins);
    std::vector<double> grid(bins);
    for (std::size_t i = 0; i < bins; ++i) grid[i] = lo + (static_cast<double>(i) + 0.5) * h;
    std::vector<std::complex<double>> amps(bins * bins);
    for (std::size_t i = 0; i < bins; ++i) {
        for (std::size_t j = 0; j < bins; ++j) amps[i * bins + j] = psi(grid[i], grid[j]);
    }
    return TabulatedSpectrum::normalized(std::move(grid), std::move(amps));
}

}  // namespace homrot
