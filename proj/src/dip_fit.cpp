#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "homrot/errors.hpp"
#include "homrot/estimation.hpp"

namespace homrot {

double DipFitResult::rate(double x) const {
    const double u = (x - center) / width;
    return baseline_rate * (1.0 - visibility * std::exp(-0.5 * u * u));
}

double DipFitResult::rate_slope(double x) const {
    const double u = (x - center) / width;
    return baseline_rate * visibility * std::exp(-0.5 * u * u) * u / width;
}

namespace {

constexpr std::size_t kMinPoints = 8;
constexpr double kMinSpanWidths = 3.0;
const double kHalfDepthToSigma = std::sqrt(2.0 * std::log(2.0));

struct ScanData {
    std::vector<double> x, counts, dwell;
};

// Internal parameters: baseline B, visibility V, centre offset c and width w, the last
// two in units of `scale` measured from `origin`.
struct Parameters {
    Eigen::Vector4d theta;
    double origin;
    double scale;

    double center() const { return origin + theta[2] * scale; }
    double width() const { return theta[3] * scale; }
};

struct ModelEval {
    Eigen::VectorXd mean;
    Eigen::MatrixXd jacobian;  // d mean / d theta
};

ModelEval evaluate(const ScanData& d, const Parameters& p) {
    const auto n = static_cast<Eigen::Index>(d.x.size());
    ModelEval e{Eigen::VectorXd(n), Eigen::MatrixXd(n, 4)};
    const double b = p.theta[0], v = p.theta[1];
    const double x0 = p.center(), s = p.width();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = (d.x[i] - x0) / s;
        const double g = std::exp(-0.5 * u * u);
        const double t = d.dwell[i];
        e.mean[i] = t * b * (1.0 - v * g);
        e.jacobian(i, 0) = t * (1.0 - v * g);
        e.jacobian(i, 1) = -t * b * g;
        e.jacobian(i, 2) = -t * b * v * g * u / s * p.scale;
        e.jacobian(i, 3) = -t * b * v * g * u * u / s * p.scale;
    }
    return e;
}

double deviance(const ScanData& d, const Eigen::VectorXd& mean) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
        const double k = d.counts[i];
        const double m = mean[i];
        if (m < 0.0) return std::numeric_limits<double>::infinity();
        if (k > 0.0) {
            if (m == 0.0) return std::numeric_limits<double>::infinity();
            dev += 2.0 * (k * std::log(k / m) - (k - m));
        } else {
            dev += 2.0 * m;
        }
    }
    return dev;
}

Eigen::VectorXd poisson_weights(const Eigen::VectorXd& mean) {
    const double floor = std::max(1e-6 * mean.maxCoeff(), std::numeric_limits<double>::min());
    return mean.unaryExpr([floor](double m) { return 1.0 / std::max(m, floor); });
}

bool admissible(const Parameters& p) {
    return p.theta[0] > 0.0 && p.theta[3] > 0.0 && p.theta[1] >= 0.0 && p.theta[1] <= 1.0;
}

Parameters initial_guess(const ScanData& d) {
    const std::size_t n = d.x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return d.x[a] < d.x[b]; });
    std::vector<double> xs(n), rate(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = d.x[order[i]];
        rate[i] = d.counts[order[i]] / d.dwell[order[i]];
    }
    // Baseline from the two outermost points on each side.
    const double baseline = 0.25 * (rate[0] + rate[1] + rate[n - 2] + rate[n - 1]);
    const std::size_t imin =
        static_cast<std::size_t>(std::min_element(rate.begin(), rate.end()) - rate.begin());
    const double depth = baseline - rate[imin];
    const double half = baseline - 0.5 * depth;

    double half_width_sum = 0.0;
    int sides = 0;
    for (std::size_t i = imin; i-- > 0;) {
        if (rate[i] >= half) {
            const double f = (half - rate[i + 1]) / (rate[i] - rate[i + 1]);
            half_width_sum += xs[imin] - (xs[i + 1] + f * (xs[i] - xs[i + 1]));
            ++sides;
            break;
        }
    }
    for (std::size_t i = imin + 1; i < n; ++i) {
        if (rate[i] >= half) {
            const double f = (half - rate[i - 1]) / (rate[i] - rate[i - 1]);
            half_width_sum += (xs[i - 1] + f * (xs[i] - xs[i - 1])) - xs[imin];
            ++sides;
            break;
        }
    }
    double width = sides > 0 ? half_width_sum / sides / kHalfDepthToSigma
                             : (xs.back() - xs.front()) / 6.0;
    if (!(width > 0.0)) width = (xs.back() - xs.front()) / 6.0;

    Parameters p;
    p.origin = xs[imin];
    p.scale = width;
    p.theta << std::max(baseline, std::numeric_limits<double>::min()),
        std::clamp(baseline > 0.0 ? depth / baseline : 0.5, 0.05, 1.0), 0.0, 1.0;
    return p;
}

}  // namespace

DipFitResult fit_dip(std::span<const CountsRecord> records, const DipFitOptions& options) {
    if (records.size() < kMinPoints) {
        throw DomainError("fit_dip needs at least 8 scan points, got " +
                          std::to_string(records.size()));
    }
    ScanData d;
    for (const auto& r : records) {
        if (!(r.dwell > 0.0)) throw DomainError("fit_dip: record with non-positive dwell");
        d.x.push_back(r.stage_position);
        d.counts.push_back(options.use_expected_counts ? r.expected_coincidences
                                                       : static_cast<double>(r.coincidences));
        d.dwell.push_back(r.dwell);
    }
    const auto [xmin, xmax] = std::minmax_element(d.x.begin(), d.x.end());
    const double span = *xmax - *xmin;

    Parameters p = initial_guess(d);
    ModelEval eval = evaluate(d, p);
    double dev = deviance(d, eval.mean);
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < options.max_iterations && !converged; ++iter) {
        const Eigen::VectorXd w = poisson_weights(eval.mean);
        const Eigen::VectorXd resid =
            Eigen::Map<const Eigen::VectorXd>(d.counts.data(), eval.mean.size()) - eval.mean;
        const Eigen::Matrix4d h = eval.jacobian.transpose() * w.asDiagonal() * eval.jacobian;
        const Eigen::Vector4d g = eval.jacobian.transpose() * w.cwiseProduct(resid);

        bool accepted = false;
        while (!accepted) {
            Eigen::Matrix4d damped = h;
            damped.diagonal() += lambda * h.diagonal().cwiseMax(1e-300);
            const Eigen::Vector4d step = damped.ldlt().solve(g);
            Parameters trial = p;
            trial.theta += step;
            trial.theta[1] = std::clamp(trial.theta[1], 0.0, 1.0);
            if (step.allFinite() && admissible(trial)) {
                ModelEval trial_eval = evaluate(d, trial);
                const double trial_dev = deviance(d, trial_eval.mean);
                if (trial_dev <= dev) {
                    const Eigen::Vector4d change = trial.theta - p.theta;
                    converged = true;
                    for (int j = 0; j < 4; ++j) {
                        if (std::abs(change[j]) > 1e-13 * std::max(std::abs(p.theta[j]), 1.0)) {
                            converged = false;
                        }
                    }
                    p = trial;
                    eval = std::move(trial_eval);
                    dev = trial_dev;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    continue;
                }
            }
            lambda *= 10.0;
            if (lambda > 1e16) {
                // No descent direction left at working precision.
                converged = true;
                break;
            }
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "dip fit did not converge after " << iter << " iterations (deviance " << dev
            << ", centre " << p.center() << " m, width " << p.width() << " m, visibility "
            << p.theta[1] << ", baseline " << p.theta[0] << " /s)";
        throw FitError(msg.str());
    }

    DipFitResult fit;
    fit.baseline_rate = p.theta[0];
    fit.visibility = p.theta[1];
    fit.center = p.center();
    fit.width = p.width();
    fit.deviance = dev;
    fit.iterations = iter;
    if (span < kMinSpanWidths * fit.width) {
        std::ostringstream msg;
        msg << "scan span " << span << " m covers fewer than 3 fitted widths (" << fit.width
            << " m)";
        throw FitError(msg.str());
    }

    const Eigen::VectorXd w = poisson_weights(eval.mean);
    const Eigen::Matrix4d fisher = eval.jacobian.transpose() * w.asDiagonal() * eval.jacobian;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(fisher);
    if (!lu.isInvertible()) throw FitError("dip fit: singular Fisher information");
    const Eigen::Vector4d to_physical(1.0, 1.0, p.scale, p.scale);
    fit.covariance = to_physical.asDiagonal() * lu.inverse() * to_physical.asDiagonal();
    return fit;
}

}  // namespace homrot
