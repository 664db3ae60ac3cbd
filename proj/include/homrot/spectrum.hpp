#pragma once

#include <complex>
#include <span>
#include <variant>
#include <vector>

namespace homrot {

/// psi(w1, w2) = g(w1) g(w2) with g(w) = (2 pi sigma^2)^{-1/4} exp(-(w - mu)^2 / (4 sigma^2)).
/// |g|^2 is a normal density with standard deviation `width`.
struct SeparableGaussian {
    double center;  // rad/s
    double width;   // rad/s
};

enum class ExchangeSymmetry { Symmetric, Antisymmetric };

/// Two-colour state N [g_a(w1) g_b(w2) +/- g_b(w1) g_a(w2)] built from two Gaussians
/// of common width. The antisymmetric combination anti-bunches.
struct GaussianPair {
    double center_a;  // rad/s
    double center_b;  // rad/s
    double width;     // rad/s
    ExchangeSymmetry symmetry;
};

/// Amplitudes sampled on a uniform frequency grid; amplitude(i, j) = psi(grid[i], grid[j]).
/// Each grid node stands for one frequency bin of width step().
class TabulatedSpectrum {
public:
    /// Stores the values as given. No normalization is applied.
    TabulatedSpectrum(std::vector<double> grid, std::vector<std::complex<double>> amplitudes);

    /// Rescales the amplitudes so that sum |psi|^2 step^2 = 1.
    static TabulatedSpectrum normalized(std::vector<double> grid,
                                        std::vector<std::complex<double>> amplitudes);

    std::size_t size() const { return grid_.size(); }
    double step() const { return step_; }
    std::span<const double> grid() const { return grid_; }
    std::complex<double> amplitude(std::size_t i, std::size_t j) const {
        return amplitudes_[i * grid_.size() + j];
    }
    /// Discrete L2 norm squared, sum |psi_ij|^2 step^2.
    double norm_squared() const;

private:
    std::vector<double> grid_;
    std::vector<std::complex<double>> amplitudes_;
    double step_ = 0.0;
};

/// Joint spectral amplitude of the photon pair. Analytic variants are normalized by
/// construction; tabulated ones are checked by consumers.
class JointSpectralAmplitude {
public:
    using Variant = std::variant<SeparableGaussian, GaussianPair, TabulatedSpectrum>;

    /// Requires width > 0 and center >= 10 * width.
    static JointSpectralAmplitude separable_gaussian(double center, double width);
    static JointSpectralAmplitude gaussian_pair(double center_a, double center_b, double width,
                                                ExchangeSymmetry symmetry);
    static JointSpectralAmplitude tabulated(TabulatedSpectrum table);

    const Variant& variant() const { return value_; }
    bool is_tabulated() const { return std::holds_alternative<TabulatedSpectrum>(value_); }
    const SeparableGaussian* as_separable_gaussian() const {
        return std::get_if<SeparableGaussian>(&value_);
    }

    /// Point evaluation. Only defined for the analytic variants.
    std::complex<double> operator()(double w1, double w2) const;

    /// Frequency window [lo, hi] holding the spectral support: +/- 8 widths around every
    /// centre, clipped at zero. For tables this is the grid extent.
    std::pair<double, double> support() const;

private:
    explicit JointSpectralAmplitude(Variant v) : value_(std::move(v)) {}
    Variant value_;
};

/// Samples an analytic amplitude at the midpoints of `bins` equal bins over [lo, hi]
/// and normalizes the result.
TabulatedSpectrum tabulate(const JointSpectralAmplitude& psi, std::size_t bins, double lo,
                           double hi);

}  // namespace homrot
