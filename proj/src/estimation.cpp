#include "homrot/estimation.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "homrot/constants.hpp"
#include "homrot/errors.hpp"

namespace homrot {
namespace {

// Estimates beyond this many widths from the centre are clipped; the dip has
// effectively reached the baseline there.
constexpr double kMaxBranchWidths = 5.0;

}  // namespace

double steepest_point(const DipFitResult& fit, DipSide side) {
    return side == DipSide::Negative ? fit.center - fit.width : fit.center + fit.width;
}

DelayEstimate invert_counts(double counts, double dwell, double position, const DipFitResult& fit) {
    if (!(dwell > 0.0)) throw DomainError("invert_counts: dwell must be positive");
    if (!(fit.visibility > 0.0) || !(fit.baseline_rate > 0.0) || !(fit.width > 0.0)) {
        throw DomainError("invert_counts: fitted dip has no depth to invert");
    }
    const double branch = position <= fit.center ? -1.0 : 1.0;
    const double q = (1.0 - counts / (dwell * fit.baseline_rate)) / fit.visibility;
    const double q_min = std::exp(-0.5 * kMaxBranchWidths * kMaxBranchWidths);

    DelayEstimate est;
    double u = 0.0;
    if (q >= 1.0) {
        est.status = EstimateStatus::ClippedBelowDip;
    } else if (q <= q_min) {
        u = branch * kMaxBranchWidths;
        est.status = EstimateStatus::ClippedAboveBaseline;
    } else {
        u = branch * std::sqrt(-2.0 * std::log(q));
    }
    const double x_hat = fit.center + fit.width * u;
    est.delay = x_hat - position;
    const double lambda = dwell * fit.rate(x_hat);
    const double slope = dwell * std::abs(fit.rate_slope(x_hat));
    est.std = slope > 0.0 ? std::sqrt(lambda) / slope : std::numeric_limits<double>::infinity();
    return est;
}

DelayEstimate mle_delay(const CountsRecord& record, const DipFitResult& fit) {
    auto est = invert_counts(static_cast<double>(record.coincidences), record.dwell,
                             record.stage_position, fit);
    est.setting = record.setting;
    est.run = record.run;
    return est;
}

DelayEstimate mle_delay_expected(const CountsRecord& record, const DipFitResult& fit) {
    auto est = invert_counts(record.expected_coincidences, record.dwell, record.stage_position, fit);
    est.setting = record.setting;
    est.run = record.run;
    return est;
}

std::vector<ReducedShift> cw_acw_reduce(std::span<const ShiftSample> samples) {
    struct Accumulator {
        double sum[2] = {0.0, 0.0};
        double var[2] = {0.0, 0.0};
        std::size_t count[2] = {0, 0};
    };
    std::map<double, Accumulator> groups;
    for (const auto& s : samples) {
        if (s.direction == Direction::None) {
            throw GroupingError("shift sample without a rotation direction");
        }
        const int k = s.direction == Direction::Clockwise ? 0 : 1;
        auto& acc = groups[s.magnitude];
        acc.sum[k] += s.value;
        acc.var[k] += s.std * s.std;
        ++acc.count[k];
    }
    std::vector<ReducedShift> out;
    out.reserve(groups.size());
    for (const auto& [magnitude, acc] : groups) {
        if (acc.count[0] == 0 || acc.count[1] == 0) {
            std::ostringstream msg;
            msg << "rotation magnitude " << magnitude << " lacks "
                << (acc.count[0] == 0 ? "clockwise" : "anticlockwise") << " samples";
            throw GroupingError(msg.str());
        }
        ReducedShift r;
        r.magnitude = magnitude;
        r.cw_count = acc.count[0];
        r.acw_count = acc.count[1];
        r.cw_mean = acc.sum[0] / static_cast<double>(acc.count[0]);
        r.acw_mean = acc.sum[1] / static_cast<double>(acc.count[1]);
        r.cw_std = std::sqrt(acc.var[0]) / static_cast<double>(acc.count[0]);
        r.acw_std = std::sqrt(acc.var[1]) / static_cast<double>(acc.count[1]);
        r.shift = 0.5 * (r.cw_mean - r.acw_mean);
        r.absolute_average = 0.5 * (std::abs(r.cw_mean) + std::abs(r.acw_mean));
        r.std = 0.5 * std::hypot(r.cw_std, r.acw_std);
        out.push_back(r);
    }
    return out;
}

double reduced_value(const ReducedShift& r, Reduction mode) {
    return mode == Reduction::HalfDifference ? r.shift : r.absolute_average;
}

SlopeFit fit_linear(std::span<const double> x, std::span<const double> y,
                    std::span<const double> y_std) {
    if (x.size() != y.size() || x.size() != y_std.size()) {
        throw DomainError("fit_linear: x, y and y_std must have equal length");
    }
    if (std::set<double>(x.begin(), x.end()).size() < 2) {
        throw FitError("fit_linear: need at least two distinct x values");
    }
    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y_std[i] > 0.0) || !std::isfinite(y_std[i])) {
            throw DomainError("fit_linear: y_std must be positive and finite");
        }
        const double w = 1.0 / (y_std[i] * y_std[i]);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
    }
    const double xm = swx / sw;
    const double ym = swy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = 1.0 / (y_std[i] * y_std[i]);
        sxx += w * (x[i] - xm) * (x[i] - xm);
        sxy += w * (x[i] - xm) * (y[i] - ym);
    }
    if (!(sxx > 0.0)) throw FitError("fit_linear: degenerate design");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    f.slope_std = std::sqrt(1.0 / sxx);
    f.intercept_std = std::sqrt(1.0 / sw + xm * xm / sxx);
    f.covariance = -xm / sxx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = (y[i] - f.intercept - f.slope * x[i]) / y_std[i];
        f.chi_square += r * r;
    }
    f.dof = static_cast<int>(x.size()) - 2;
    return f;
}

double ratio_analysis(double quantum_slope, double classical_slope, double wavelength) {
    if (classical_slope == 0.0) throw DomainError("ratio_analysis: classical slope is zero");
    if (!(wavelength > 0.0)) throw DomainError("ratio_analysis: wavelength must be positive");
    return (wavelength / constants::two_pi) / (quantum_slope / classical_slope);
}

}  // namespace homrot
