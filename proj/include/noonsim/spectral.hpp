#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "noonsim/errors.hpp"
#include "noonsim/quadrature.hpp"

namespace noonsim {

/// Two-frequency pair amplitude in detuning coordinates u = omega - center.
/// Either a closed two-Gaussian form, exp(-(u1+u2)^2/(4 sp^2)) *
/// exp(-(u1-u2)^2/(4 sm^2)), or a sampled complex matrix on a uniform
/// detuning grid. The center frequency is carried as metadata only; all
/// kernels and overlap integrals work at baseband, so delay phases enter as
/// e^{i u tau} without the carrier.
template <class Scalar = double>
class JointSpectralAmplitude {
public:
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    /// Weighted samples ready for contraction: weighted(i,j) =
    /// sqrt(w_i w_j) * Phi(u_i, u_j).
    struct Sampled {
        std::vector<Scalar> nodes;
        std::vector<Scalar> weights;
        Matrix weighted;
    };

    static JointSpectralAmplitude gaussian(Scalar sigma_plus, Scalar sigma_minus,
                                           Scalar center = Scalar(0)) {
        if (!(sigma_plus > Scalar(0)) || !(sigma_minus > Scalar(0)))
            throw OutOfRange("bandwidths must be positive");
        JointSpectralAmplitude jsa;
        jsa.gaussian_ = true;
        jsa.sigma_plus_ = sigma_plus;
        jsa.sigma_minus_ = sigma_minus;
        jsa.center_ = center;
        jsa.symmetric_ = true;
        return jsa;
    }

    /// Sampled form on a uniform, increasing detuning grid. The grid must be
    /// adequate: values decayed below 1e-8 of the peak on every edge. With
    /// symmetric=true (the physical default) exchange symmetry is enforced to
    /// 1e-12 of the peak.
    static JointSpectralAmplitude from_grid(std::vector<Scalar> detunings, Matrix values,
                                            bool symmetric = true,
                                            Scalar center = Scalar(0)) {
        const int n = static_cast<int>(detunings.size());
        if (n < 2) throw GridInadequate("grid needs at least two samples per axis");
        if (values.rows() != n || values.cols() != n)
            throw GridInadequate("value matrix does not match the detuning grid");

        const Scalar step = detunings[1] - detunings[0];
        if (!(step > Scalar(0)))
            throw GridInadequate("detunings must be strictly increasing");
        for (int i = 1; i < n; ++i) {
            const Scalar d = detunings[static_cast<std::size_t>(i)] -
                             detunings[static_cast<std::size_t>(i - 1)];
            if (std::abs(d - step) > Scalar(1e-9) * step)
                throw GridInadequate("detuning grid must be uniform");
        }

        const Scalar peak = values.cwiseAbs().maxCoeff();
        if (peak == Scalar(0)) throw GridInadequate("all grid values vanish");
        Scalar edge = 0;
        for (int i = 0; i < n; ++i) {
            edge = std::max({edge, std::abs(values(0, i)), std::abs(values(n - 1, i)),
                             std::abs(values(i, 0)), std::abs(values(i, n - 1))});
        }
        if (edge > Scalar(1e-8) * peak)
            throw GridInadequate("values do not decay at the grid edges");

        if (symmetric) {
            const Scalar asym = (values - values.transpose()).cwiseAbs().maxCoeff();
            if (asym > Scalar(1e-12) * peak)
                throw GridInadequate("grid values are not exchange symmetric");
        }

        JointSpectralAmplitude jsa;
        jsa.gaussian_ = false;
        jsa.detunings_ = std::move(detunings);
        jsa.values_ = std::move(values);
        jsa.step_ = step;
        jsa.center_ = center;
        jsa.symmetric_ = symmetric;
        return jsa;
    }

    bool is_gaussian() const { return gaussian_; }
    bool symmetric() const { return symmetric_; }
    Scalar center() const { return center_; }
    Scalar sigma_plus() const { return require_gaussian(), sigma_plus_; }
    Scalar sigma_minus() const { return require_gaussian(), sigma_minus_; }

    /// Half the truncation box of the Gaussian form: values at |u| = box_radius
    /// on either axis are below e^{-36} of the peak for any bandwidth ratio.
    Scalar box_radius() const {
        require_gaussian();
        return Scalar(6) * std::hypot(sigma_plus_, sigma_minus_);
    }

    /// Longest timescale over which delayed pairs still overlap: the inverse
    /// of the smaller bandwidth. Estimated from second moments for grids.
    Scalar coherence_time() const {
        if (gaussian_) return Scalar(1) / std::min(sigma_plus_, sigma_minus_);
        const auto [sp, sm] = grid_bandwidths();
        return Scalar(1) / std::min(sp, sm);
    }

    /// Largest |t| (or |tau|) the sampled form can represent without aliasing.
    Scalar resolvable_window() const {
        if (gaussian_)
            throw UnsupportedCase("the closed form has no aliasing window");
        return std::numbers::pi_v<Scalar> / step_;
    }

    Complex closed_form_value(Scalar u1, Scalar u2) const {
        require_gaussian();
        const Scalar sp = (u1 + u2) / (Scalar(2) * sigma_plus_);
        const Scalar sm = (u1 - u2) / (Scalar(2) * sigma_minus_);
        return Complex(std::exp(-sp * sp - sm * sm));
    }

    /// Node floor that resolves the narrow anti-diagonal ridge of the
    /// Gaussian form. The box scales with hypot(sigma_plus, sigma_minus)
    /// while the ridge width is the smaller bandwidth, so skewed sources
    /// need proportionally more nodes. Capped so extreme aspect ratios
    /// degrade gracefully instead of exhausting memory.
    int ridge_nodes() const {
        require_gaussian();
        const Scalar aspect = box_radius() / std::min(sigma_plus_, sigma_minus_);
        const int floor_nodes = static_cast<int>(std::ceil(Scalar(5) * aspect));
        return std::min(1024, std::max(64, floor_nodes));
    }

    /// Weighted samples for contraction work. The Gaussian form is sampled on
    /// a Gauss-Legendre grid of at least min_nodes points per axis over
    /// [-box_radius, box_radius]; the grid form returns its own samples with
    /// uniform weights.
    Sampled sampled(int min_nodes = 64) const {
        Sampled out;
        if (gaussian_) {
            const int n = std::max(ridge_nodes(), min_nodes);
            const Scalar r = box_radius();
            const auto rule = scaled_to(gauss_legendre<Scalar>(n), -r, r);
            out.nodes = rule.nodes;
            out.weights = rule.weights;
            out.weighted.resize(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const Scalar wij = std::sqrt(rule.weights[static_cast<std::size_t>(i)] *
                                                 rule.weights[static_cast<std::size_t>(j)]);
                    out.weighted(i, j) =
                        wij * closed_form_value(rule.nodes[static_cast<std::size_t>(i)],
                                                rule.nodes[static_cast<std::size_t>(j)]);
                }
            return out;
        }
        const int n = static_cast<int>(detunings_.size());
        out.nodes = detunings_;
        out.weights.assign(static_cast<std::size_t>(n), step_);
        out.weighted = values_ * Complex(step_);
        return out;
    }

    /// Node count that keeps Gauss-Legendre accurate for phases e^{i u tau}
    /// up to |tau| = tau_max over the truncation box.
    int nodes_for_delay(Scalar tau_max) const {
        require_gaussian();
        const Scalar cycles = box_radius() * std::abs(tau_max) / Scalar(2);
        return std::max(ridge_nodes(),
                        static_cast<int>(std::ceil(Scalar(1.5) * cycles)) + 32);
    }

private:
    void require_gaussian() const {
        if (!gaussian_)
            throw UnsupportedCase("operation requires the closed Gaussian form");
    }

    /// Bandwidths of a sampled amplitude from the second moments of |Phi|^2
    /// along the diagonal directions (u1+u2)/sqrt(2) and (u1-u2)/sqrt(2).
    std::pair<Scalar, Scalar> grid_bandwidths() const {
        const int n = static_cast<int>(detunings_.size());
        Scalar total = 0, mp = 0, mm = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Scalar w = std::norm(values_(i, j));
                const Scalar s = (detunings_[static_cast<std::size_t>(i)] +
                                  detunings_[static_cast<std::size_t>(j)]) /
                                 std::numbers::sqrt2_v<Scalar>;
                const Scalar d = (detunings_[static_cast<std::size_t>(i)] -
                                  detunings_[static_cast<std::size_t>(j)]) /
                                 std::numbers::sqrt2_v<Scalar>;
                total += w;
                mp += w * s * s;
                mm += w * d * d;
            }
        if (total == Scalar(0)) throw DegenerateJSA("amplitude has no weight");
        return {std::sqrt(Scalar(2) * mp / total), std::sqrt(Scalar(2) * mm / total)};
    }

    bool gaussian_ = true;
    bool symmetric_ = true;
    Scalar sigma_plus_ = 1, sigma_minus_ = 1, center_ = 0;
    std::vector<Scalar> detunings_;
    Matrix values_;
    Scalar step_ = 0;
};

/// The scalar overlap integrals of a pair amplitude with itself, plus their
/// delay-resolved relatives sampled on a tau grid. For an exchange-symmetric
/// amplitude: e is real, e1 and e3 coincide, e2 = conj(e1), and every curve
/// starts at the corresponding scalar (a1(0) = a2(0) = a, e*(0) = e).
template <class Scalar = double>
struct OverlapSet {
    using Complex = std::complex<Scalar>;

    Scalar a = 0;
    Complex e{};
    std::vector<Scalar> tau_grid;
    std::vector<Complex> a1, a2, e1, e2, e3, e2sup;

    /// Synthetic set with a = 1 and the given e/a ratio, no curves. Lets the
    /// closed-form visibility formulas be driven without a source model.
    static OverlapSet from_ratio(Scalar ratio) {
        if (!(ratio >= Scalar(0) && ratio <= Scalar(1)))
            throw OutOfRange("overlap ratio must lie in [0, 1]");
        OverlapSet os;
        os.a = 1;
        os.e = Complex(ratio);
        return os;
    }

    Scalar ratio_ea() const {
        if (!(a > Scalar(0))) throw DegenerateJSA("overlap a vanishes");
        return e.real() / a;
    }
};

/// All overlap integrals of the amplitude, with the delay-dependent curves
/// evaluated on tau_grid. Four-dimensional integrals are reduced to chained
/// matrix contractions of the weighted sample matrix F and its conjugate T:
///   a    = (sum |F|^2)^2        e     = sum F o (T F T')
///   A(t) = sum_j q_j p_j,       q_j = sum_i |F_ij|^2, p_j = e^{i u_j tau}
///   a1 = A(tau) A(0)            a2    = A(tau)^2
///   e1 = p* [F o (T F' T)] p    e3    = p* [F o (T F T')] p
///   e2 = p* [T o (F T' F)] p    e2sup = tr (D*FD T')^2,  D = diag(p)
/// where o is the elementwise product and ' the plain transpose. Each
/// contraction follows its own integral's index pattern, so the symmetric
/// coincidences above are genuine checks rather than shared code paths.
template <class Scalar>
OverlapSet<Scalar> overlaps(const JointSpectralAmplitude<Scalar>& jsa,
                            const std::vector<Scalar>& tau_grid = {}) {
    using Complex = std::complex<Scalar>;
    using Matrix = typename JointSpectralAmplitude<Scalar>::Matrix;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    Scalar tau_max = 0;
    for (const Scalar t : tau_grid) tau_max = std::max(tau_max, std::abs(t));
    if (!jsa.is_gaussian() && !tau_grid.empty()) {
        if (tau_max > jsa.resolvable_window())
            throw WindowExceeded("delay exceeds the grid's resolvable window");
    }

    const auto s = jsa.sampled(jsa.is_gaussian() ? jsa.nodes_for_delay(tau_max) : 0);
    const Matrix& f = s.weighted;
    const Matrix t = f.conjugate();
    const int n = static_cast<int>(s.nodes.size());

    OverlapSet<Scalar> out;
    out.tau_grid = tau_grid;

    const Scalar i2 = f.cwiseAbs2().sum();
    out.a = i2 * i2;
    out.e = (f.cwiseProduct(t * f * t.transpose())).sum();

    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> q =
        f.cwiseAbs2().colwise().sum().transpose();

    const Matrix w1 = f.cwiseProduct(t * f.transpose() * t);
    const Matrix w3 = f.cwiseProduct(t * f * t.transpose());
    const Matrix w2 = t.cwiseProduct(f * t.transpose() * f);

    const std::size_t m = tau_grid.size();
    out.a1.resize(m);
    out.a2.resize(m);
    out.e1.resize(m);
    out.e2.resize(m);
    out.e3.resize(m);
    out.e2sup.resize(m);

    Vector p(n);
    for (std::size_t k = 0; k < m; ++k) {
        const Scalar tau = tau_grid[k];
        for (int i = 0; i < n; ++i)
            p(i) = std::exp(Complex(0, s.nodes[static_cast<std::size_t>(i)] * tau));

        Complex a_tau(0);
        for (int j = 0; j < n; ++j) a_tau += Complex(q(j)) * p(j);
        out.a1[k] = a_tau * Complex(i2);
        out.a2[k] = a_tau * a_tau;

        out.e1[k] = p.dot(w1 * p);
        out.e2[k] = p.dot(w2 * p);
        out.e3[k] = p.dot(w3 * p);

        const Vector pc = p.conjugate();
        const Matrix g = pc.asDiagonal() * f * p.asDiagonal();
        const Matrix gt = g * t.transpose();
        out.e2sup[k] = (gt * gt).trace();
    }
    return out;
}

/// Four-detector coincidence rate behind the splitter as a function of the
/// relative delay dt between the two polarizations, in arbitrary units:
///   4 Re[12(a+e) + 4 e2sup - 8(e1+e2+e3) + 4 a2 - 8 a1].
/// Equals 32(a-e) at dt = 0 and settles to 48(a+e) once dt exceeds the
/// coherence time.
template <class Scalar>
std::vector<Scalar> p4_delay_curve(const JointSpectralAmplitude<Scalar>& jsa,
                                   const std::vector<Scalar>& dt_grid) {
    const auto os = overlaps(jsa, dt_grid);
    std::vector<Scalar> out(dt_grid.size());
    for (std::size_t k = 0; k < dt_grid.size(); ++k) {
        const auto bracket = Scalar(12) * (os.a + os.e.real()) +
                             Scalar(4) * os.e2sup[k].real() -
                             Scalar(8) * (os.e1[k] + os.e2[k] + os.e3[k]).real() +
                             Scalar(4) * os.a2[k].real() - Scalar(8) * os.a1[k].real();
        out[k] = Scalar(4) * bracket;
    }
    return out;
}

template <class Scalar>
Scalar p4_delay(const JointSpectralAmplitude<Scalar>& jsa, Scalar dt) {
    return p4_delay_curve(jsa, std::vector<Scalar>{dt}).front();
}

/// Dip visibility (p4(inf) - p4(0)) / p4(inf) = (a + 5e) / (3(a + e)).
/// Runs from 1/3 at e = 0 to 1 at e = a.
template <class Scalar>
Scalar hom_visibility(const OverlapSet<Scalar>& os) {
    if (!(os.a > Scalar(0))) throw DegenerateJSA("overlap a vanishes");
    const Scalar e = os.e.real();
    return (os.a + Scalar(5) * e) / (Scalar(3) * (os.a + e));
}

/// Four-fold fringe of the single-splitter scheme, arbitrary units:
/// 64 (e + 7a/2) (1 - V cos 4 phi) with V = 3(a+2e)/(7a+2e).
template <class Scalar>
Scalar typeI_fringe(const OverlapSet<Scalar>& os, Scalar phi) {
    if (!(os.a > Scalar(0))) throw DegenerateJSA("overlap a vanishes");
    const Scalar e = os.e.real();
    const Scalar vis = Scalar(3) * (os.a + Scalar(2) * e) / (Scalar(7) * os.a + Scalar(2) * e);
    return Scalar(64) * (e + Scalar(3.5) * os.a) *
           (Scalar(1) - vis * std::cos(Scalar(4) * phi));
}

template <class Scalar>
Scalar typeI_visibility(const OverlapSet<Scalar>& os) {
    if (!(os.a > Scalar(0))) throw DegenerateJSA("overlap a vanishes");
    const Scalar e = os.e.real();
    return Scalar(3) * (os.a + Scalar(2) * e) / (Scalar(7) * os.a + Scalar(2) * e);
}

/// Two-time pair kernel: the Fourier transform of the amplitude,
/// g(t,t') = integral Phi(u1,u2) e^{-i u1 t - i u2 t'} du1 du2, evaluated by
/// quadrature at baseband (carrier phase omitted). The sampled form aliases
/// beyond its resolvable window; the Gaussian form refines its node count to
/// cover the requested times.
template <class Scalar>
std::complex<Scalar> kernel_g(const JointSpectralAmplitude<Scalar>& jsa, Scalar t,
                              Scalar t_prime) {
    using Complex = std::complex<Scalar>;
    if (!jsa.is_gaussian()) {
        const Scalar window = jsa.resolvable_window();
        if (std::max(std::abs(t), std::abs(t_prime)) > window)
            throw WindowExceeded("time outside the grid's resolvable window");
    }
    const auto s = jsa.sampled(
        jsa.is_gaussian() ? jsa.nodes_for_delay(std::max(std::abs(t), std::abs(t_prime)))
                          : 0);
    const int n = static_cast<int>(s.nodes.size());

    // Separable phases: g = sum_ij sqrt(w_i w_j) F_ij e^{-i u_i t} e^{-i u_j t'}
    // with the remaining sqrt(w) folded into the phase vectors.
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> left(n), right(n);
    for (int i = 0; i < n; ++i) {
        const Scalar rw = std::sqrt(s.weights[static_cast<std::size_t>(i)]);
        left(i) = rw * std::exp(Complex(0, -s.nodes[static_cast<std::size_t>(i)] * t));
        right(i) = rw * std::exp(Complex(0, -s.nodes[static_cast<std::size_t>(i)] * t_prime));
    }
    const Eigen::Matrix<Complex, Eigen::Dynamic, 1> half = s.weighted * right;
    Complex acc(0);
    for (int i = 0; i < n; ++i) acc += left(i) * half(i);
    return acc;
}

/// The exact Gaussian-form kernel, used as the independent route into the
/// time-domain integrals below.
template <class Scalar>
std::complex<Scalar> kernel_g_closed_form(const JointSpectralAmplitude<Scalar>& jsa,
                                          Scalar t, Scalar t_prime) {
    const Scalar sp = jsa.sigma_plus();
    const Scalar sm = jsa.sigma_minus();
    const Scalar plus = sp * (t + t_prime) / Scalar(2);
    const Scalar minus = sm * (t - t_prime) / Scalar(2);
    return std::complex<Scalar>(Scalar(2) * std::numbers::pi_v<Scalar> * sp * sm *
                                std::exp(-plus * plus - minus * minus));
}

template <class Scalar = double>
struct BIntegrals {
    Scalar b1 = 0;
    Scalar b2 = 0;
    std::complex<Scalar> b12{};
};

/// Time-domain route to the same physics: quadrature of the two four-photon
/// envelopes built from kernel products,
///   b1 = g(t1,t2)g(t3,t4) + g(t1,t3)g(t2,t4) + g(t1,t4)g(t2,t3)
///   b2 = g(t1,t2)g(t3,t4) - g(t1,t3)g(t2,t4)
/// giving B1 = int |b1|^2 = 3(a+2e), B2 = int |b2|^2 = 2(a-e), and the
/// unconjugated cross integral B12 = int b1 b2 = 0. The four-dimensional
/// integrals reduce to traces of the sampled kernel matrix M and its
/// conjugate C; every term of B12 is contracted literally from its own index
/// pattern, so its cancellation is computed rather than assumed.
template <class Scalar>
BIntegrals<Scalar> typeI_B_integrals(const JointSpectralAmplitude<Scalar>& jsa,
                                     int nodes = 64) {
    using Complex = std::complex<Scalar>;
    using Matrix = typename JointSpectralAmplitude<Scalar>::Matrix;

    Scalar half_window;
    if (jsa.is_gaussian()) {
        half_window = Scalar(6) * jsa.coherence_time();
    } else {
        half_window = Scalar(6) * jsa.coherence_time();
        if (half_window > jsa.resolvable_window())
            throw GridInadequate("kernel support exceeds the resolvable window");
    }
    const auto rule = scaled_to(gauss_legendre<Scalar>(std::max(16, nodes)),
                                -half_window, half_window);
    const int n = rule.size();

    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Scalar w = std::sqrt(rule.weights[static_cast<std::size_t>(i)] *
                                       rule.weights[static_cast<std::size_t>(j)]);
            const Complex g =
                jsa.is_gaussian()
                    ? kernel_g_closed_form(jsa, rule.nodes[static_cast<std::size_t>(i)],
                                           rule.nodes[static_cast<std::size_t>(j)])
                    : kernel_g(jsa, rule.nodes[static_cast<std::size_t>(i)],
                               rule.nodes[static_cast<std::size_t>(j)]);
            m(i, j) = w * g;
        }
    const Matrix c = m.conjugate();

    const Scalar four_pi = std::pow(Scalar(2) * std::numbers::pi_v<Scalar>, Scalar(4));
    const Complex tr_mc = (m * c).trace();
    const Complex tr_mcmc = (m * c * m * c).trace();

    BIntegrals<Scalar> out;
    out.b1 = (Scalar(3) * (tr_mc * tr_mc) + Scalar(6) * tr_mcmc).real() / four_pi;
    out.b2 = (Scalar(2) * (tr_mc * tr_mc) - Scalar(2) * tr_mcmc).real() / four_pi;

    // Six unconjugated contractions of b1*b2, one per pairing product, each
    // grouped the way its own index pattern suggests.
    const Complex s11 = m.cwiseProduct(m).sum();                        // (12)(34)x(12)(34)
    const Complex t12 = m.cwiseProduct(m * (m * m.transpose())).sum();  // (12)(34)x(13)(24)
    const Complex t21 = m.cwiseProduct((m * m) * m.transpose()).sum();  // (13)(24)x(12)(34)
    const Complex s22 = m.transpose().cwiseProduct(m.transpose()).sum();// (13)(24)x(13)(24)
    const Complex t31 = m.cwiseProduct(m * (m.transpose() * m.transpose())).sum();
    const Complex t32 = m.cwiseProduct((m * m.transpose()) * m).sum();
    out.b12 = (s11 * s11 - t12 + t21 - s22 * s22 + t31 - t32) / four_pi;
    return out;
}

enum class FringeScheme { TypeII, TypeI };

/// Visibility with detectors of finite size: v2 is the two-photon fringe
/// visibility of the underlying interferometer. Reduces to the ideal
/// formulas at v2 = 1 and vanishes at v2 = 0.
template <class Scalar>
Scalar misaligned_visibility(const OverlapSet<Scalar>& os, Scalar v2, FringeScheme scheme) {
    if (!(v2 >= Scalar(0) && v2 <= Scalar(1)))
        throw OutOfRange("v2 must lie in [0, 1]");
    if (!(os.a > Scalar(0))) throw DegenerateJSA("overlap a vanishes");
    const Scalar a = os.a;
    const Scalar e = os.e.real();
    if (scheme == FringeScheme::TypeII)
        return (Scalar(2) * v2 * (a + Scalar(3) * e) - v2 * v2 * (a + e)) /
               (Scalar(3) * (a + e));
    return Scalar(3) * (a + Scalar(2) * e) * v2 * v2 /
           ((Scalar(6) + v2 * v2) * a + Scalar(2) * e * (Scalar(3) - Scalar(2) * v2));
}

/// Detector of width dx reading a fringe of spatial period L (equivalently
/// wavelength / tilt). v is the single-photon visibility, v2 = v^2 the pair
/// visibility that enters the four-photon formulas.
template <class Scalar = double>
struct MisalignmentGeometry {
    Scalar detector_size = 0;
    Scalar fringe_spacing = 0;
    Scalar wavelength = 0;
    Scalar tilt = 0;

    static MisalignmentGeometry from_spacing(Scalar dx, Scalar spacing) {
        if (!(spacing > Scalar(0))) throw OutOfRange("fringe spacing must be positive");
        if (!(dx >= Scalar(0))) throw OutOfRange("detector size must be non-negative");
        MisalignmentGeometry g;
        g.detector_size = dx;
        g.fringe_spacing = spacing;
        return g;
    }

    static MisalignmentGeometry from_tilt(Scalar dx, Scalar lambda, Scalar dtheta) {
        if (!(lambda > Scalar(0)) || !(dtheta > Scalar(0)))
            throw OutOfRange("wavelength and tilt must be positive");
        MisalignmentGeometry g = from_spacing(dx, lambda / dtheta);
        g.wavelength = lambda;
        g.tilt = dtheta;
        return g;
    }

    Scalar v() const {
        const Scalar x = std::numbers::pi_v<Scalar> * detector_size / fringe_spacing;
        if (std::abs(x) < Scalar(1e-8))
            return Scalar(1) - x * x / Scalar(6);
        return std::sin(x) / x;
    }

    Scalar v2() const {
        const Scalar s = v();
        return s * s;
    }
};

template <class Scalar>
Scalar v2_from_geometry(const MisalignmentGeometry<Scalar>& geom) {
    return geom.v2();
}

} // namespace noonsim
