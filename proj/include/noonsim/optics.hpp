#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "noonsim/fock.hpp"

namespace noonsim {

template <class Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// Lossless beam splitter with intensity reflectivity r:
///   [ tau    i rho ]      tau = sqrt(1-r), rho = sqrt(r).
///   [ i rho  tau   ]
/// The reflected amplitude carries the factor i on both sides.
template <class Scalar = double>
Matrix2c<Scalar> beam_splitter(Scalar reflectivity) {
    if (!(reflectivity >= Scalar(0) && reflectivity <= Scalar(1)))
        throw OutOfRange("beam splitter reflectivity must lie in [0, 1]");
    const Scalar tau = std::sqrt(Scalar(1) - reflectivity);
    const Scalar rho = std::sqrt(reflectivity);
    Matrix2c<Scalar> m;
    m << std::complex<Scalar>(tau), std::complex<Scalar>(0, rho),
         std::complex<Scalar>(0, rho), std::complex<Scalar>(tau);
    return m;
}

/// Relative phase on the second basis mode: diag(1, e^{i delta}).
template <class Scalar = double>
Matrix2c<Scalar> phase_delay(Scalar delta) {
    Matrix2c<Scalar> m = Matrix2c<Scalar>::Identity();
    m(1, 1) = std::exp(std::complex<Scalar>(0, delta));
    return m;
}

/// Half-wave plate with fast axis at `theta` to horizontal:
///   [ cos 2t   sin 2t ]
///   [ sin 2t  -cos 2t ]
template <class Scalar = double>
Matrix2c<Scalar> half_wave_plate(Scalar theta) {
    const Scalar c = std::cos(Scalar(2) * theta);
    const Scalar s = std::sin(Scalar(2) * theta);
    Matrix2c<Scalar> m;
    m << std::complex<Scalar>(c), std::complex<Scalar>(s),
         std::complex<Scalar>(s), std::complex<Scalar>(-c);
    return m;
}

/// Quarter-wave plate with fast axis horizontal: diag(1, i).
template <class Scalar = double>
Matrix2c<Scalar> quarter_wave_plate() {
    Matrix2c<Scalar> m = Matrix2c<Scalar>::Identity();
    m(1, 1) = std::complex<Scalar>(0, 1);
    return m;
}

/// Polarizer oriented at -45 degrees, kept unitary by retaining the rejected
/// component as an explicit second output: the H slot carries the transmitted
/// (H - V)/sqrt(2), the V slot the rejected (H + V)/sqrt(2).
template <class Scalar = double>
Matrix2c<Scalar> polarizer_minus_45() {
    const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
    Matrix2c<Scalar> m;
    m << std::complex<Scalar>(s), std::complex<Scalar>(-s),
         std::complex<Scalar>(s), std::complex<Scalar>(s);
    return m;
}

namespace detail {

template <class Scalar>
void place_block(Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& big,
                 const ModeSet& modes, const Matrix2c<Scalar>& block,
                 const ModeLabel& a, const ModeLabel& b) {
    const int i = modes.index_of(a);
    const int j = modes.index_of(b);
    big(i, i) = block(0, 0);
    big(i, j) = block(0, 1);
    big(j, i) = block(1, 0);
    big(j, j) = block(1, 1);
}

} // namespace detail

/// An assembled projection network over 2n modes (n ports, H and V each).
/// `transform` maps input creation operators to output ones; `detector_modes`
/// lists, in detection order, the output mode watched by each detector.
template <class Scalar = double>
struct ProjectionNetwork {
    int n = 0;
    std::vector<Scalar> reflectivities;
    std::vector<Scalar> phase_delays;
    ModeTransform<Scalar> transform;
    std::vector<ModeLabel> detector_modes;
};

/// Splits the port-0 input evenly over n arms with a chain of beam splitters
/// of reflectivity 1/n, 1/(n-1), ..., 1/2 (each acting identically on H and
/// V), applies the arm phases 2(k-1)pi/n to the V component of arm k, then a
/// -45 degree polarizer in every arm. Arm k sits on port k for k < n and on
/// the pass-through port 0 for k = n; each arm's detector watches the
/// transmitted (H) slot of its polarizer. Supported for 2 <= n <= 8.
template <class Scalar = double>
ProjectionNetwork<Scalar> build_noon_network(int n) {
    using Matrix = typename ModeTransform<Scalar>::Matrix;
    if (n < 2 || n > 8)
        throw OutOfRange("network size must lie in [2, 8]");

    const ModeSet modes = ModeSet::ports(n);
    const int dim = modes.size();
    Matrix u = Matrix::Identity(dim, dim);

    std::vector<Scalar> reflectivities;
    for (int k = 1; k <= n - 1; ++k) {
        const Scalar r = Scalar(1) / Scalar(n - k + 1);
        reflectivities.push_back(r);
        const Matrix2c<Scalar> b = beam_splitter<Scalar>(r);
        Matrix step = Matrix::Identity(dim, dim);
        detail::place_block(step, modes, b, horizontal(0), horizontal(k));
        detail::place_block(step, modes, b, vertical(0), vertical(k));
        u = step * u;
    }

    std::vector<Scalar> phase_delays;
    Matrix delays = Matrix::Identity(dim, dim);
    for (int arm = 1; arm <= n; ++arm) {
        const int port = arm < n ? arm : 0;
        const Scalar delta =
            Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(arm - 1) / Scalar(n);
        phase_delays.push_back(delta);
        delays(modes.index_of(vertical(port)), modes.index_of(vertical(port))) =
            std::exp(std::complex<Scalar>(0, delta));
    }
    u = delays * u;

    Matrix polarizers = Matrix::Identity(dim, dim);
    for (int p = 0; p < n; ++p)
        detail::place_block(polarizers, modes, polarizer_minus_45<Scalar>(),
                            horizontal(p), vertical(p));
    u = polarizers * u;

    std::vector<ModeLabel> detector_modes;
    for (int arm = 1; arm <= n; ++arm)
        detector_modes.push_back(horizontal(arm < n ? arm : 0));

    return ProjectionNetwork<Scalar>{n, std::move(reflectivities),
                                     std::move(phase_delays),
                                     ModeTransform<Scalar>(std::move(u), modes),
                                     std::move(detector_modes)};
}

/// Four-detector network made of one balanced beam splitter and wave plates:
/// the port-0 arm carries a half-wave plate at 22.5 degrees, the port-1 arm a
/// quarter-wave plate followed by the same half-wave plate. Both output
/// polarizations of both ports are detected, so four photons entering port 0
/// are split 2 + 2 and analyzed in two mutually unbiased bases.
template <class Scalar = double>
ProjectionNetwork<Scalar> wave_plate_network() {
    using Matrix = typename ModeTransform<Scalar>::Matrix;
    const ModeSet modes = ModeSet::ports(2);
    const int dim = modes.size();

    Matrix splitter = Matrix::Identity(dim, dim);
    const Matrix2c<Scalar> b = beam_splitter<Scalar>(Scalar(0.5));
    detail::place_block(splitter, modes, b, horizontal(0), horizontal(1));
    detail::place_block(splitter, modes, b, vertical(0), vertical(1));

    const Scalar theta = std::numbers::pi_v<Scalar> / Scalar(8);
    const Matrix2c<Scalar> hwp = half_wave_plate<Scalar>(theta);
    const Matrix2c<Scalar> hwp_qwp = hwp * quarter_wave_plate<Scalar>();

    Matrix plates = Matrix::Identity(dim, dim);
    detail::place_block(plates, modes, hwp, horizontal(0), vertical(0));
    detail::place_block(plates, modes, hwp_qwp, horizontal(1), vertical(1));

    Matrix u = plates * splitter;

    std::vector<ModeLabel> detector_modes{horizontal(0), vertical(0),
                                          horizontal(1), vertical(1)};

    return ProjectionNetwork<Scalar>{4, {Scalar(0.5)}, {},
                                     ModeTransform<Scalar>(std::move(u), modes),
                                     std::move(detector_modes)};
}

/// The detection channels of a network, written in input-mode terms: the row
/// of the transform matrix belonging to each watched output mode. Each
/// operator is rephased so its port-0 H coefficient is real and positive, and
/// coefficients below the prune threshold are dropped.
template <class Scalar>
std::vector<DetectorOperator<Scalar>> detector_operators(const ProjectionNetwork<Scalar>& net) {
    using Complex = std::complex<Scalar>;
    const auto& u = net.transform.matrix();
    const ModeSet& modes = net.transform.modes();

    std::vector<DetectorOperator<Scalar>> out;
    out.reserve(net.detector_modes.size());
    for (const ModeLabel& d : net.detector_modes) {
        const int row = modes.index_of(d);
        Complex phase(1);
        const int h0 = modes.index_of(horizontal(0));
        if (std::abs(u(row, h0)) > FockState<Scalar>::prune_threshold())
            phase = std::conj(u(row, h0)) / std::abs(u(row, h0));

        DetectorOperator<Scalar> det;
        for (int j = 0; j < modes.size(); ++j) {
            const Complex c = phase * u(row, j);
            if (std::abs(c) < FockState<Scalar>::prune_threshold()) continue;
            det.terms.emplace_back(modes.label(j), c);
        }
        out.push_back(std::move(det));
    }
    return out;
}

} // namespace noonsim
