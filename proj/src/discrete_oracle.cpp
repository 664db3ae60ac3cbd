#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>

#include "homrot/errors.hpp"
#include "homrot/physics.hpp"

namespace homrot {

// Two-photon sector over 2M discrete modes: indices [0, M) are the clockwise modes a_k,
// [M, 2M) the anticlockwise modes b_k. A state sum_pq C_pq m_p^dag m_q^dag |0> is stored
// as the (not necessarily symmetric) coefficient matrix C.
OracleResult coincidence_probability_discrete_oracle(const TabulatedSpectrum& psi,
                                                     const PathDelays& delays) {
    using Matrix = Eigen::MatrixXcd;
    const std::size_t bins = psi.size();
    if (bins > kOracleMaxBins) {
        throw ResourceError("discrete oracle accepts at most " + std::to_string(kOracleMaxBins) +
                            " bins per axis, got " + std::to_string(bins));
    }
    const auto m = static_cast<Eigen::Index>(bins);
    const auto grid = psi.grid();
    const double h = psi.step();

    // Initial state with flight phases. Phases reach ~1e9 rad for a 100 m fibre, so they
    // are formed and reduced in extended precision.
    const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
    Matrix state = Matrix::Zero(2 * m, 2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const long double w1 = grid[static_cast<std::size_t>(i)];
            const long double w2 = grid[static_cast<std::size_t>(j)];
            const long double phi =
                w1 * (static_cast<long double>(delays.t_plus) + delays.stage_delay) +
                w2 * static_cast<long double>(delays.t_minus);
            const double reduced = static_cast<double>(std::fmod(phi, two_pi));
            state(i, m + j) = psi.amplitude(static_cast<std::size_t>(i),
                                            static_cast<std::size_t>(j)) *
                              h * std::polar(1.0, -reduced);
        }
    }

    // Beamsplitter: a^dag -> (i a^dag + b^dag)/sqrt2, b^dag -> (a^dag + i b^dag)/sqrt2,
    // acting bin by bin. Column q holds the image of input mode q.
    const std::complex<double> i_unit{0.0, 1.0};
    const double r = 1.0 / std::sqrt(2.0);
    Matrix u = Matrix::Zero(2 * m, 2 * m);
    for (Eigen::Index k = 0; k < m; ++k) {
        u(k, k) = i_unit * r;
        u(m + k, k) = r;
        u(k, m + k) = r;
        u(m + k, m + k) = i_unit * r;
    }
    const Matrix out = u * state * u.transpose();

    // Coincidence projector: one photon in each output port, any frequencies.
    double coincidence = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index l = 0; l < m; ++l) {
            coincidence += std::norm(out(k, m + l) + out(m + l, k));
        }
    }
    // Full norm of the output state: distinct-mode pairs plus doubly occupied modes.
    const Matrix sym = out + out.transpose();
    double norm = 0.0;
    for (Eigen::Index p = 0; p < 2 * m; ++p) {
        for (Eigen::Index q = p + 1; q < 2 * m; ++q) norm += std::norm(sym(p, q));
        norm += 2.0 * std::norm(out(p, p));
    }
    return {coincidence, norm};
}

}  // namespace homrot
