#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "homrot/instrument.hpp"

namespace homrot {

/// Fitted dip in stage coordinates: rate(x) = B (1 - V exp(-(x - x0)^2 / (2 s^2))).
struct DipFitResult {
    double center = 0.0;         // x0, m
    double width = 0.0;          // s, m
    double visibility = 0.0;     // V
    double baseline_rate = 0.0;  // B, counts/s
    /// Fisher covariance, parameter order (baseline_rate, visibility, center, width).
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    double deviance = 0.0;       // Poisson deviance at the optimum
    int iterations = 0;

    double rate(double x) const;
    /// d rate / dx.
    double rate_slope(double x) const;
    double center_std() const { return std::sqrt(covariance(2, 2)); }
    double width_std() const { return std::sqrt(covariance(3, 3)); }
    double visibility_std() const { return std::sqrt(covariance(1, 1)); }
    double baseline_std() const { return std::sqrt(covariance(0, 0)); }
};

struct DipFitOptions {
    bool use_expected_counts = false;  // fit the noiseless means instead of the draws
    int max_iterations = 200;
};

/// Poisson maximum-likelihood fit of the Gaussian dip (Fisher scoring with
/// Levenberg-Marquardt damping; weights are the modelled means). Needs >= 8 records;
/// throws FitError if it does not converge or the scan covers less than 3 widths.
DipFitResult fit_dip(std::span<const CountsRecord> records, const DipFitOptions& options = {});

enum class DipSide { Negative, Positive };

/// x0 - s or x0 + s, where |d rate / dx| peaks.
double steepest_point(const DipFitResult& fit, DipSide side = DipSide::Negative);

enum class EstimateStatus { Ok, ClippedBelowDip, ClippedAboveBaseline };

struct DelayEstimate {
    double delay = 0.0;  // m, stage-equivalent shift relative to the record's stage position
    double std = 0.0;    // m
    EstimateStatus status = EstimateStatus::Ok;
    std::uint32_t setting = 0;
    std::uint32_t run = 0;
};

/// Maximum-likelihood delay for `counts` recorded over `dwell` at `position`, treating
/// the fitted dip as the exact rate model: solves rate(position + delay) = counts/dwell
/// on the monotonic branch that contains `position`. Std is sqrt(lambda)/|d lambda/dx|.
DelayEstimate invert_counts(double counts, double dwell, double position, const DipFitResult& fit);

DelayEstimate mle_delay(const CountsRecord& record, const DipFitResult& fit);

/// As mle_delay but on the record's expected counts (noiseless pipelines).
DelayEstimate mle_delay_expected(const CountsRecord& record, const DipFitResult& fit);

struct ShiftSample {
    double magnitude = 0.0;
    Direction direction = Direction::Clockwise;
    double value = 0.0;
    double std = 0.0;
};

struct ReducedShift {
    double magnitude = 0.0;
    double shift = 0.0;          // (cw - acw) / 2
    double std = 0.0;
    double absolute_average = 0.0;  // (|cw| + |acw|) / 2
    double cw_mean = 0.0;
    double acw_mean = 0.0;
    double cw_std = 0.0;         // propagated std of the clockwise mean
    double acw_std = 0.0;
    std::size_t cw_count = 0;
    std::size_t acw_count = 0;
};

enum class Reduction { HalfDifference, AbsoluteAverage };

/// Groups samples by magnitude (ascending) and combines the clockwise and anticlockwise
/// means. Throws GroupingError when a magnitude lacks one of the two directions.
std::vector<ReducedShift> cw_acw_reduce(std::span<const ShiftSample> samples);

/// The reduced value selected by `mode`.
double reduced_value(const ReducedShift& r, Reduction mode);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_std = 0.0;
    double intercept_std = 0.0;
    double covariance = 0.0;   // cov(slope, intercept)
    double chi_square = 0.0;
    int dof = 0;
};

/// Weighted straight-line fit y = intercept + slope x with weights 1/y_std^2.
/// Throws FitError when fewer than two distinct x values are given.
SlopeFit fit_linear(std::span<const double> x, std::span<const double> y,
                    std::span<const double> y_std);

/// (wavelength / 2 pi) / (quantum_slope / classical_slope). Classical slope in rad per
/// rate unit, quantum slope in m per rate unit.
double ratio_analysis(double quantum_slope, double classical_slope, double wavelength);

}  // namespace homrot
