#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "noonsim/fock.hpp"

namespace noonsim {

/// An n-photon two-mode superposition sum_k c_k |n-k photons H, k photons V>
/// on one port. coeffs[k] multiplies the term with k vertical photons; the
/// vector must be normalized to 1e-12.
template <class Scalar = double>
struct SuperpositionCoeffs {
    using Complex = std::complex<Scalar>;

    int n = 0;
    std::vector<Complex> coeffs;

    SuperpositionCoeffs(int photon_number, std::vector<Complex> c)
        : n(photon_number), coeffs(std::move(c)) {
        if (n < 1) throw OutOfRange("photon number must be positive");
        if (static_cast<int>(coeffs.size()) != n + 1)
            throw DimensionMismatch("coefficient vector must have n + 1 entries");
        Scalar norm2 = 0;
        for (const auto& c : coeffs) norm2 += std::norm(c);
        if (std::abs(norm2 - Scalar(1)) > Scalar(1e-12))
            throw OutOfRange("superposition coefficients are not normalized");
    }

    /// (|n,0> + |0,n>)/sqrt(2).
    static SuperpositionCoeffs noon(int photon_number) {
        std::vector<Complex> c(static_cast<std::size_t>(photon_number) + 1, Complex(0));
        const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
        c.front() = Complex(s);
        c.back() = Complex(s);
        return SuperpositionCoeffs(photon_number, std::move(c));
    }

    /// Phase phi accumulated per vertical photon: c_k -> c_k e^{i k phi}.
    SuperpositionCoeffs with_phase(Scalar phi) const {
        std::vector<Complex> c = coeffs;
        for (int k = 0; k <= n; ++k)
            c[static_cast<std::size_t>(k)] *= std::exp(Complex(0, Scalar(k) * phi));
        return SuperpositionCoeffs(n, std::move(c));
    }

    /// The state over the two polarization modes of port 0.
    FockState<Scalar> to_state(int photon_cap = -1) const {
        const int cap = photon_cap < 0 ? n : photon_cap;
        std::vector<std::pair<Occupation, Complex>> terms;
        for (int k = 0; k <= n; ++k)
            terms.emplace_back(Occupation{n - k, k}, coeffs[static_cast<std::size_t>(k)]);
        return FockState<Scalar>::from_terms(ModeSet::polarization_pair(0), terms, cap);
    }
};

/// Fringe of the extreme-component interference: |c_0 - c_n e^{i n phi}|^2.
/// For the balanced two-component superposition this is 1 - cos(n phi).
template <class Scalar>
Scalar noon_projection(const SuperpositionCoeffs<Scalar>& state, Scalar phi) {
    const auto c0 = state.coeffs.front();
    const auto cn = state.coeffs.back();
    return std::norm(c0 - cn * std::exp(std::complex<Scalar>(0, Scalar(state.n) * phi)));
}

/// Factorization of sum_k c_k x^{n-k}: the finite roots, the leading nonzero
/// coefficient, and the count of leading zero coefficients (each a root that
/// escaped to infinity, lowering the polynomial degree below n).
template <class Scalar = double>
struct RootSet {
    using Complex = std::complex<Scalar>;

    int n = 0;
    std::vector<Complex> roots;
    Complex scale{};
    int degree_deficit = 0;
};

namespace detail {

/// Diagonal similarity scaling by radix-2 powers until row and column moduli
/// sums are within a factor of two of each other. Improves eigenvalue
/// conditioning of the companion matrix without perturbing the spectrum.
template <class Scalar>
void balance_moduli(Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& m) {
    const Eigen::Index d = m.rows();
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < d; ++i) {
            Scalar row = 0, col = 0;
            for (Eigen::Index j = 0; j < d; ++j) {
                if (j == i) continue;
                row += std::abs(m(i, j));
                col += std::abs(m(j, i));
            }
            if (row == Scalar(0) || col == Scalar(0)) continue;
            const Scalar start = col + row;
            Scalar f = 1;
            Scalar c = col, r = row;
            while (c < r / Scalar(2)) { c *= 2; r /= 2; f *= 2; }
            while (c >= r * Scalar(2)) { c /= 2; r *= 2; f /= 2; }
            if (c + r < Scalar(0.95) * start) {
                converged = false;
                m.col(i) *= std::complex<Scalar>(f);
                m.row(i) /= std::complex<Scalar>(f);
            }
        }
    }
}

} // namespace detail

/// Roots of sum_k coeffs[k] x^{n-k} via the balanced companion matrix, where
/// n = coeffs.size() - 1. Roots are sorted by real part, then imaginary part,
/// so equal inputs give identical output.
template <class Scalar>
RootSet<Scalar> factor_superposition(const std::vector<std::complex<Scalar>>& coeffs) {
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    if (coeffs.empty()) throw ZeroPolynomial("empty coefficient vector");
    const int n = static_cast<int>(coeffs.size()) - 1;

    Scalar max_abs = 0;
    for (const auto& c : coeffs) max_abs = std::max(max_abs, std::abs(c));
    if (max_abs == Scalar(0))
        throw ZeroPolynomial("all coefficients vanish");
    const Scalar zero_tol = Scalar(1e-14) * max_abs;

    int deficit = 0;
    while (deficit <= n && std::abs(coeffs[static_cast<std::size_t>(deficit)]) <= zero_tol)
        ++deficit;
    const Complex scale = coeffs[static_cast<std::size_t>(deficit)];
    const int degree = n - deficit;

    RootSet<Scalar> out;
    out.n = n;
    out.scale = scale;
    out.degree_deficit = deficit;
    if (degree == 0) return out;

    // Monic coefficients a_j of x^degree + sum_j a_j x^j, a_j = c_{n-j}/scale.
    Matrix companion = Matrix::Zero(degree, degree);
    for (int j = 0; j < degree; ++j) {
        companion(j, degree - 1) = -coeffs[static_cast<std::size_t>(n - j)] / scale;
        if (j + 1 < degree) companion(j + 1, j) = Complex(1);
    }
    detail::balance_moduli(companion);

    Eigen::ComplexEigenSolver<Matrix> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw InfiniteRoot("companion eigenvalue iteration failed");

    out.roots.resize(static_cast<std::size_t>(degree));
    for (int k = 0; k < degree; ++k)
        out.roots[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    std::sort(out.roots.begin(), out.roots.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

template <class Scalar>
RootSet<Scalar> factor_superposition(const SuperpositionCoeffs<Scalar>& state,
                                     Scalar phi = Scalar(0)) {
    return factor_superposition(state.with_phase(phi).coeffs);
}

/// Expands scale * prod_k (x - r_k) back into descending-power coefficients,
/// left-padded with the deficit zeros. Inverse of factor_superposition up to
/// root-finding error.
template <class Scalar>
std::vector<std::complex<Scalar>> reconstruct_coefficients(const RootSet<Scalar>& rs) {
    using Complex = std::complex<Scalar>;
    std::vector<Complex> poly{Complex(1)};
    for (const Complex& r : rs.roots) {
        std::vector<Complex> next(poly.size() + 1, Complex(0));
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] += poly[j];
            next[j + 1] -= poly[j] * r;
        }
        poly = std::move(next);
    }
    std::vector<Complex> out(static_cast<std::size_t>(rs.n) + 1, Complex(0));
    for (std::size_t j = 0; j < poly.size(); ++j)
        out[static_cast<std::size_t>(rs.degree_deficit) + j] = rs.scale * poly[j];
    return out;
}

/// One detection channel per root: b_k = (a_H - r_k a_V) / (sqrt(n) sqrt(1+|r_k|^2)).
/// The product of all n channels realizes the superposition as an n-fold
/// coincidence. A degree deficit has no finite-channel realization.
template <class Scalar>
std::vector<DetectorOperator<Scalar>> projector_operators(const RootSet<Scalar>& rs) {
    using Complex = std::complex<Scalar>;
    if (rs.degree_deficit > 0)
        throw InfiniteRoot("leading coefficient vanishes, a root lies at infinity");
    std::vector<DetectorOperator<Scalar>> out;
    out.reserve(rs.roots.size());
    const Scalar root_n = std::sqrt(Scalar(rs.n));
    for (const Complex& r : rs.roots) {
        const Scalar w = root_n * std::sqrt(Scalar(1) + std::norm(r));
        DetectorOperator<Scalar> det;
        det.terms.emplace_back(horizontal(0), Complex(1) / w);
        det.terms.emplace_back(vertical(0), -r / w);
        out.push_back(std::move(det));
    }
    return out;
}

/// The state the n-fold coincidence actually detects: amplitudes proportional
/// to conj(c_k) sqrt((n-k)! k!), normalized. Candidates orthogonal to this
/// direction produce no coincidences.
template <class Scalar>
SuperpositionCoeffs<Scalar> detected_direction(const SuperpositionCoeffs<Scalar>& target) {
    using Complex = std::complex<Scalar>;
    std::vector<Complex> t(static_cast<std::size_t>(target.n) + 1);
    Scalar norm2 = 0;
    for (int k = 0; k <= target.n; ++k) {
        Scalar fact = 1;
        for (int q = 2; q <= target.n - k; ++q) fact *= Scalar(q);
        for (int q = 2; q <= k; ++q) fact *= Scalar(q);
        t[static_cast<std::size_t>(k)] =
            std::conj(target.coeffs[static_cast<std::size_t>(k)]) * std::sqrt(fact);
        norm2 += std::norm(t[static_cast<std::size_t>(k)]);
    }
    const Scalar inv = Scalar(1) / std::sqrt(norm2);
    for (auto& c : t) c *= inv;
    return SuperpositionCoeffs<Scalar>(target.n, std::move(t));
}

/// Vacuum amplitude of the n-fold coincidence, in closed form:
///   (prod_k w_k)^{-1} scale^{-1} sum_k c_k d_k sqrt((n-k)! k!)
/// with the per-channel weights w_k of projector_operators and the target
/// coefficients carrying the phase phi. Identical to applying the channel
/// operators of the phi-shifted target to the candidate state.
template <class Scalar>
std::complex<Scalar> projection_amplitude(const SuperpositionCoeffs<Scalar>& target,
                                          const SuperpositionCoeffs<Scalar>& candidate,
                                          Scalar phi = Scalar(0)) {
    using Complex = std::complex<Scalar>;
    if (target.n != candidate.n)
        throw PhotonNumberMismatch("target and candidate photon numbers differ");
    const auto shifted = target.with_phase(phi);
    const RootSet<Scalar> rs = factor_superposition(shifted.coeffs);
    if (rs.degree_deficit > 0)
        throw InfiniteRoot("leading coefficient vanishes, a root lies at infinity");

    Complex prefactor = Complex(1) / rs.scale;
    const Scalar root_n = std::sqrt(Scalar(rs.n));
    for (const Complex& r : rs.roots)
        prefactor /= root_n * std::sqrt(Scalar(1) + std::norm(r));

    Complex acc(0);
    for (int k = 0; k <= target.n; ++k) {
        Scalar fact = 1;
        for (int q = 2; q <= target.n - k; ++q) fact *= Scalar(q);
        for (int q = 2; q <= k; ++q) fact *= Scalar(q);
        acc += shifted.coeffs[static_cast<std::size_t>(k)] *
               candidate.coeffs[static_cast<std::size_t>(k)] * std::sqrt(fact);
    }
    return prefactor * acc;
}

template <class Scalar>
Scalar projection_probability(const SuperpositionCoeffs<Scalar>& target,
                              const SuperpositionCoeffs<Scalar>& candidate,
                              Scalar phi = Scalar(0)) {
    return std::norm(projection_amplitude(target, candidate, phi));
}

/// True when the candidate produces no coincidence against the target's
/// channel set: probability below 1e-10.
template <class Scalar>
bool is_orthogonal_projection_null(const SuperpositionCoeffs<Scalar>& target,
                                   const SuperpositionCoeffs<Scalar>& candidate,
                                   Scalar phi = Scalar(0)) {
    return projection_probability(target, candidate, phi) < Scalar(1e-10);
}

} // namespace noonsim
