#pragma once

#include <complex>

#include "homrot/spectrum.hpp"

namespace homrot {

/// Fibre loop on the platform. `enclosed_area()` is the effective Sagnac area N pi r^2.
struct PlatformGeometry {
    double loop_diameter = 0.0;     // m
    int turns = 0;
    double fiber_length = 0.0;      // m
    double phase_index = 1.0;
    double group_index = 1.0;
    double free_space_path = 0.0;   // m of extra common free-space path

    /// Throws DomainError unless lengths are positive, turns >= 0 and indices >= 1.
    void validate() const;
    double enclosed_area() const;

    bool operator==(const PlatformGeometry&) const = default;
};

/// How the user-facing rotation number maps onto the angular rate used by the physics.
/// PaperF: the number is used directly as the angular rate (rad/s). This reproduces the
/// measured 170 deg/Hz and 200 nm/Hz slopes. PhysicalHz: the number is a frequency in
/// Hz and the angular rate is 2 pi times it, i.e. dt = 8 pi A f / c^2.
enum class RateConvention { PaperF, PhysicalHz };

struct RotationRate {
    double value = 0.0;
    RateConvention convention = RateConvention::PaperF;

    double angular_rate() const;  // rad/s, same sign as value
    RotationRate reversed() const { return {-value, convention}; }

    bool operator==(const RotationRate&) const = default;
};

/// Arrival-time bookkeeping for the two counter-propagating paths.
struct PathDelays {
    double t_plus = 0.0;        // s, clockwise time of flight
    double t_minus = 0.0;       // s, anticlockwise time of flight
    double stage_delay = 0.0;   // s, extra delay on the clockwise arm
    double sagnac_delta = 0.0;  // s, t_plus - t_minus held exactly

    /// Delay that sets the interference: sagnac_delta + stage_delay.
    double total_delay() const { return sagnac_delta + stage_delay; }
};

double enclosed_area(int turns, double loop_diameter);

/// dt = 4 A Omega / c^2.
double sagnac_delay(double area, RotationRate rate);

/// Phase picked up by a classical beam of vacuum wavelength `wavelength` for a delay dt.
double classical_phase_shift(double delta_t, double wavelength);

PathDelays flight_times(const PlatformGeometry& geometry, RotationRate rate, double stage_delay);

/// phi = w1 (t_plus + stage_delay) + w2 t_minus.
double accumulated_phase(double w1, double w2, const PathDelays& delays);

struct CoincidenceResult {
    double probability = 0.0;
    std::complex<double> overlap;   // the double integral in p = (1 - Re overlap) / 2
    double estimated_error = 0.0;   // |overlap_n - overlap_2n| at the accepted order
    double norm = 0.0;              // integral of |psi|^2 on the same rule
    int order = 0;                  // Gauss-Legendre nodes per axis (0 for tables)
};

/// Coincidence probability for total delay T by 2-D quadrature of the overlap integral.
/// Analytic amplitudes use tensor Gauss-Legendre with order doubling; tables use the
/// bin (midpoint) rule on their own grid. Throws DomainError for unnormalized input and
/// NumericalError if the quadrature does not converge.
CoincidenceResult coincidence_probability(const JointSpectralAmplitude& psi, double total_delay);

/// Closed form for the separable Gaussian source: p = (1 - exp(-sigma^2 T^2)) / 2.
double coincidence_probability_gaussian(double stage_delay, RotationRate rate, double area,
                                        double width);

/// Closed form evaluated directly at total delay T.
double gaussian_dip(double total_delay, double width);

struct OracleResult {
    double probability = 0.0;
    double state_norm = 0.0;  // <chi_bs|chi_bs>, should stay 1
};

inline constexpr std::size_t kOracleMaxBins = 128;

/// Brute-force finite-mode evaluation: builds the two-photon amplitude tensor over the
/// clockwise/anticlockwise mode pairs, applies the flight phases, transforms the modes
/// with the beamsplitter matrix and sums the coincidence projector explicitly.
/// Throws ResourceError above kOracleMaxBins bins per axis.
OracleResult coincidence_probability_discrete_oracle(const TabulatedSpectrum& psi,
                                                     const PathDelays& delays);

/// Stage displacement c dt / n_g that re-centres the dip after a delay dt.
double dip_shift_stage(double delta_t, double group_index);

/// Gaussian std c / (sqrt(2) sigma n_g) of the dip in stage coordinates for a separable
/// Gaussian source of spectral width sigma.
double dip_width_stage(double spectral_width, double group_index);

/// Delay introduced by moving the stage by `position` metres: n_g x / c.
double stage_delay_from_position(double position, double group_index);

}  // namespace homrot
