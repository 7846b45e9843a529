#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <initializer_list>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

enum class Polarization : int { H = 0, V = 1 };

/// One optical mode: a spatial port plus a polarization. Ordering is
/// port-major, polarization-minor (H before V), which fixes the layout of
/// occupation vectors and transform matrices everywhere else.
struct ModeLabel {
    int port = 0;
    Polarization pol = Polarization::H;

    friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
};

inline ModeLabel horizontal(int port) { return {port, Polarization::H}; }
inline ModeLabel vertical(int port) { return {port, Polarization::V}; }

/// Sorted, duplicate-free list of mode labels. The position of a label in the
/// set is the index used by occupation vectors and transform matrices.
class ModeSet {
public:
    ModeSet() = default;

    explicit ModeSet(std::vector<ModeLabel> labels) : labels_(std::move(labels)) {
        std::sort(labels_.begin(), labels_.end());
        if (std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end())
            throw OutOfRange("duplicate mode label in mode set");
        if (labels_.empty())
            throw OutOfRange("mode set must not be empty");
    }

    ModeSet(std::initializer_list<ModeLabel> labels)
        : ModeSet(std::vector<ModeLabel>(labels)) {}

    /// Both polarizations of a single port.
    static ModeSet polarization_pair(int port) {
        return ModeSet{horizontal(port), vertical(port)};
    }

    /// Ports 0..count-1, each with H and V.
    static ModeSet ports(int count) {
        if (count < 1) throw OutOfRange("port count must be positive");
        std::vector<ModeLabel> labels;
        labels.reserve(2 * static_cast<std::size_t>(count));
        for (int p = 0; p < count; ++p) {
            labels.push_back(horizontal(p));
            labels.push_back(vertical(p));
        }
        return ModeSet(std::move(labels));
    }

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<ModeLabel>& labels() const { return labels_; }
    const ModeLabel& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }

    bool contains(const ModeLabel& m) const {
        return std::binary_search(labels_.begin(), labels_.end(), m);
    }

    int index_of(const ModeLabel& m) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), m);
        if (it == labels_.end() || *it != m)
            throw DimensionMismatch("mode label not present in mode set");
        return static_cast<int>(it - labels_.begin());
    }

    friend bool operator==(const ModeSet&, const ModeSet&) = default;

private:
    std::vector<ModeLabel> labels_;
};

using Occupation = std::vector<int>;

/// Sparse few-photon state: a map from occupation vectors (one entry per mode
/// of the mode set) to complex amplitudes. Amplitudes below the prune
/// threshold are dropped after every operation. Value semantics; all
/// operations on states are pure functions.
template <class Scalar = double>
class FockState {
public:
    using Complex = std::complex<Scalar>;
    using TermMap = std::map<Occupation, Complex>;

    static constexpr Scalar prune_threshold() { return Scalar(1e-14); }

    FockState(ModeSet modes, int photon_cap)
        : modes_(std::move(modes)), photon_cap_(photon_cap) {
        if (photon_cap_ < 0) throw OutOfRange("photon cap must be non-negative");
    }

    static FockState vacuum(ModeSet modes, int photon_cap) {
        FockState s(std::move(modes), photon_cap);
        s.terms_[Occupation(static_cast<std::size_t>(s.modes_.size()), 0)] = Complex(1);
        return s;
    }

    static FockState basis_state(ModeSet modes, const Occupation& occ, int photon_cap) {
        FockState s(std::move(modes), photon_cap);
        s.check_occupation(occ);
        s.terms_[occ] = Complex(1);
        return s;
    }

    static FockState from_terms(ModeSet modes,
                                const std::vector<std::pair<Occupation, Complex>>& terms,
                                int photon_cap) {
        FockState s(std::move(modes), photon_cap);
        for (const auto& [occ, amp] : terms) {
            s.check_occupation(occ);
            s.terms_[occ] += amp;
        }
        s.prune();
        return s;
    }

    const ModeSet& modes() const { return modes_; }
    int photon_cap() const { return photon_cap_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Complex amplitude(const Occupation& occ) const {
        auto it = terms_.find(occ);
        return it == terms_.end() ? Complex(0) : it->second;
    }

    Scalar squared_norm() const {
        Scalar acc = 0;
        for (const auto& [occ, amp] : terms_) acc += std::norm(amp);
        return acc;
    }

    Scalar norm() const { return std::sqrt(squared_norm()); }

    /// Total photon number, provided every term agrees; -1 for the zero state.
    int photon_number() const {
        int n = -1;
        for (const auto& [occ, amp] : terms_) {
            int total = std::accumulate(occ.begin(), occ.end(), 0);
            if (n < 0) n = total;
            else if (n != total)
                throw PhotonNumberMismatch("state is not a photon-number eigenstate");
        }
        return n;
    }

    /// Same state re-indexed over a larger mode set; new modes are unoccupied.
    FockState embedded(const ModeSet& target) const {
        std::vector<int> where(static_cast<std::size_t>(modes_.size()));
        for (int i = 0; i < modes_.size(); ++i)
            where[static_cast<std::size_t>(i)] = target.index_of(modes_.label(i));
        FockState out(target, photon_cap_);
        for (const auto& [occ, amp] : terms_) {
            Occupation big(static_cast<std::size_t>(target.size()), 0);
            for (std::size_t i = 0; i < occ.size(); ++i)
                big[static_cast<std::size_t>(where[i])] = occ[i];
            out.terms_[big] = amp;
        }
        return out;
    }

    FockState& operator+=(const FockState& other) {
        if (modes_ != other.modes_)
            throw DimensionMismatch("mode sets differ in state addition");
        for (const auto& [occ, amp] : other.terms_) {
            auto [it, inserted] = terms_.try_emplace(occ, amp);
            if (!inserted) it->second += amp;
        }
        prune();
        return *this;
    }

    FockState operator+(const FockState& other) const {
        FockState out = *this;
        out += other;
        return out;
    }

    FockState operator*(Complex factor) const {
        FockState out = *this;
        for (auto& [occ, amp] : out.terms_) amp *= factor;
        out.prune();
        return out;
    }

    friend FockState operator*(Complex factor, const FockState& s) { return s * factor; }

    void check_occupation(const Occupation& occ) const {
        if (static_cast<int>(occ.size()) != modes_.size())
            throw DimensionMismatch("occupation length does not match mode set");
        int total = 0;
        for (int n : occ) {
            if (n < 0) throw OutOfRange("negative occupation");
            total += n;
        }
        if (total > photon_cap_)
            throw CapExceeded("occupation exceeds photon cap");
    }

    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (std::abs(it->second) < prune_threshold()) it = terms_.erase(it);
            else ++it;
        }
    }

    // Direct term access for the operator implementations below.
    TermMap& mutable_terms() { return terms_; }

private:
    ModeSet modes_;
    int photon_cap_ = 0;
    TermMap terms_;
};

/// a† on one mode, with the sqrt(n+1) ladder factor.
template <class Scalar>
FockState<Scalar> create(const FockState<Scalar>& state, const ModeLabel& mode) {
    const int k = state.modes().index_of(mode);
    FockState<Scalar> out(state.modes(), state.photon_cap());
    for (const auto& [occ, amp] : state.terms()) {
        int total = std::accumulate(occ.begin(), occ.end(), 0);
        if (total + 1 > state.photon_cap())
            throw CapExceeded("create would exceed the photon cap");
        Occupation next = occ;
        next[static_cast<std::size_t>(k)] += 1;
        auto factor = std::sqrt(Scalar(next[static_cast<std::size_t>(k)]));
        out.mutable_terms()[next] += amp * factor;
    }
    out.prune();
    return out;
}

/// a on one mode, with the sqrt(n) ladder factor; annihilating an unoccupied
/// mode contributes nothing (the zero state is a legal result).
template <class Scalar>
FockState<Scalar> annihilate(const FockState<Scalar>& state, const ModeLabel& mode) {
    const int k = state.modes().index_of(mode);
    FockState<Scalar> out(state.modes(), state.photon_cap());
    for (const auto& [occ, amp] : state.terms()) {
        const int n = occ[static_cast<std::size_t>(k)];
        if (n == 0) continue;
        Occupation next = occ;
        next[static_cast<std::size_t>(k)] -= 1;
        out.mutable_terms()[next] += amp * std::sqrt(Scalar(n));
    }
    out.prune();
    return out;
}

/// Linear mode transform: under apply_transform the creation operators map as
/// a_j† -> sum_k U(k,j) a_k†. The matrix must be unitary to 1e-12 (loss is
/// modeled by enlarging the mode set, never by sub-unitary blocks).
template <class Scalar = double>
class ModeTransform {
public:
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

    ModeTransform(Matrix matrix, ModeSet modes)
        : matrix_(std::move(matrix)), modes_(std::move(modes)) {
        if (matrix_.rows() != matrix_.cols())
            throw DimensionMismatch("transform matrix must be square");
        if (matrix_.rows() != modes_.size())
            throw DimensionMismatch("transform size does not match mode set");
        const Matrix gram = matrix_.adjoint() * matrix_;
        const Scalar defect =
            (gram - Matrix::Identity(matrix_.rows(), matrix_.cols())).cwiseAbs().maxCoeff();
        if (defect > Scalar(1e-12))
            throw NotUnitary("transform matrix is not unitary within 1e-12");
    }

    static ModeTransform identity(ModeSet modes) {
        const int n = modes.size();
        return ModeTransform(Matrix::Identity(n, n), std::move(modes));
    }

    const Matrix& matrix() const { return matrix_; }
    const ModeSet& modes() const { return modes_; }

    /// Composition: this transform applied after `first`.
    ModeTransform after(const ModeTransform& first) const {
        if (modes_ != first.modes_)
            throw DimensionMismatch("mode sets differ in transform composition");
        return ModeTransform(matrix_ * first.matrix_, modes_);
    }

    /// The same element acting on a larger mode set, identity elsewhere.
    /// `placement` maps each of this transform's modes to a target label.
    ModeTransform embedded(const ModeSet& target,
                           const std::vector<ModeLabel>& placement) const {
        if (static_cast<int>(placement.size()) != modes_.size())
            throw DimensionMismatch("placement length does not match transform");
        std::vector<int> at(placement.size());
        for (std::size_t i = 0; i < placement.size(); ++i)
            at[i] = target.index_of(placement[i]);
        Matrix big = Matrix::Identity(target.size(), target.size());
        for (std::size_t i = 0; i < placement.size(); ++i)
            for (std::size_t j = 0; j < placement.size(); ++j)
                big(at[i], at[j]) = matrix_(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j));
        return ModeTransform(std::move(big), target);
    }

private:
    Matrix matrix_;
    ModeSet modes_;
};

/// Re-expresses each basis term as a product of transformed creation
/// operators acting on vacuum. Exact for any photon number under the cap;
/// photon number is conserved, so the cap cannot be exceeded.
template <class Scalar>
FockState<Scalar> apply_transform(const FockState<Scalar>& state,
                                  const ModeTransform<Scalar>& transform) {
    using Complex = std::complex<Scalar>;
    if (state.modes() != transform.modes())
        throw DimensionMismatch("state and transform mode sets differ");
    const auto& U = transform.matrix();
    const int m = state.modes().size();

    FockState<Scalar> result(state.modes(), state.photon_cap());
    const Occupation vac(static_cast<std::size_t>(m), 0);

    for (const auto& [occ, amp] : state.terms()) {
        // |occ> = prod_j (a_j^dag)^{n_j} / sqrt(n_j!) |0>
        Scalar norm_factor = 1;
        for (int j = 0; j < m; ++j)
            for (int q = 1; q <= occ[static_cast<std::size_t>(j)]; ++q)
                norm_factor *= std::sqrt(Scalar(q));

        typename FockState<Scalar>::TermMap current;
        current[vac] = amp / norm_factor;

        for (int j = 0; j < m; ++j) {
            for (int q = 0; q < occ[static_cast<std::size_t>(j)]; ++q) {
                typename FockState<Scalar>::TermMap next;
                for (const auto& [o, a] : current) {
                    for (int k = 0; k < m; ++k) {
                        const Complex u = U(k, j);
                        if (u == Complex(0)) continue;
                        Occupation no = o;
                        no[static_cast<std::size_t>(k)] += 1;
                        const Scalar ladder =
                            std::sqrt(Scalar(no[static_cast<std::size_t>(k)]));
                        auto [it, inserted] = next.try_emplace(no, Complex(0));
                        it->second += a * u * ladder;
                    }
                }
                current = std::move(next);
            }
        }
        for (const auto& [o, a] : current) result.mutable_terms()[o] += a;
    }
    result.prune();
    return result;
}

/// <a|b>, conjugate-linear in the first argument.
template <class Scalar>
std::complex<Scalar> inner_product(const FockState<Scalar>& a, const FockState<Scalar>& b) {
    if (a.modes() != b.modes())
        throw DimensionMismatch("mode sets differ in inner product");
    std::complex<Scalar> acc(0);
    const auto& small = a.terms().size() <= b.terms().size() ? a.terms() : b.terms();
    const bool small_is_a = a.terms().size() <= b.terms().size();
    for (const auto& [occ, amp] : small) {
        const auto other = small_is_a ? b.amplitude(occ) : a.amplitude(occ);
        acc += small_is_a ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return acc;
}

/// One detection channel: a linear form in annihilation operators,
/// sum_m coeff_m a_m. Labels the state does not carry are treated as
/// unoccupied vacuum ports and contribute nothing when applied.
template <class Scalar = double>
struct DetectorOperator {
    using Complex = std::complex<Scalar>;

    std::vector<std::pair<ModeLabel, Complex>> terms;

    /// Canonical signal modes are the two polarizations of port 0.
    Complex coeff_h() const { return coeff_for(horizontal(0)); }
    Complex coeff_v() const { return coeff_for(vertical(0)); }

    std::vector<Complex> loss_coeffs() const {
        std::vector<Complex> out;
        for (const auto& [label, c] : terms)
            if (label != horizontal(0) && label != vertical(0)) out.push_back(c);
        return out;
    }

    Scalar squared_weight() const {
        Scalar acc = 0;
        for (const auto& [label, c] : terms) acc += std::norm(c);
        return acc;
    }

    Complex coeff_for(const ModeLabel& m) const {
        Complex acc(0);
        for (const auto& [label, c] : terms)
            if (label == m) acc += c;
        return acc;
    }

    static DetectorOperator single_mode(const ModeLabel& m) {
        return DetectorOperator{{{m, Complex(1)}}};
    }
};

template <class Scalar>
FockState<Scalar> apply(const DetectorOperator<Scalar>& det, const FockState<Scalar>& state) {
    FockState<Scalar> acc(state.modes(), state.photon_cap());
    for (const auto& [label, coeff] : det.terms) {
        if (coeff == std::complex<Scalar>(0)) continue;
        if (!state.modes().contains(label)) continue; // vacuum port: a|0> = 0
        acc += annihilate(state, label) * coeff;
    }
    return acc;
}

/// || b_1 ... b_n |state> ||^2 : the n-fold coincidence rate of the listed
/// detection channels (normally ordered, unnormalized).
template <class Scalar>
Scalar coincidence_probability(const FockState<Scalar>& state,
                               const std::vector<DetectorOperator<Scalar>>& detectors) {
    FockState<Scalar> current = state;
    for (const auto& det : detectors) {
        if (current.is_zero()) return Scalar(0);
        current = apply(det, current);
    }
    return current.squared_norm();
}

/// Largest per-term amplitude difference; states must share a mode set.
template <class Scalar>
Scalar max_term_difference(const FockState<Scalar>& a, const FockState<Scalar>& b) {
    if (a.modes() != b.modes())
        throw DimensionMismatch("mode sets differ in comparison");
    Scalar worst = 0;
    for (const auto& [occ, amp] : a.terms())
        worst = std::max(worst, std::abs(amp - b.amplitude(occ)));
    for (const auto& [occ, amp] : b.terms())
        worst = std::max(worst, std::abs(amp - a.amplitude(occ)));
    return worst;
}

} // namespace noonsim
