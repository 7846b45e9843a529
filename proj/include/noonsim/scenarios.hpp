#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

/// Relative timing of two photon pairs against the detection coherence time:
/// both pairs well separated (TwoByTwo), both inside one coherence window
/// (FourByOne), or all four photons mutually separated (OneByFour).
enum class PairTimingCase { TwoByTwo, FourByOne, OneByFour };

namespace detail {

template <class Scalar>
struct DetectorRow {
    std::complex<Scalar> h, v;
};

/// The four analyzer channels behind the splitter: two linear at +-45
/// degrees, two circular. Rows are (H, V) coefficients, normalized.
template <class Scalar>
std::array<DetectorRow<Scalar>, 4> analyzer_rows() {
    using C = std::complex<Scalar>;
    const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
    return {DetectorRow<Scalar>{C(s), C(s)}, DetectorRow<Scalar>{C(s), C(-s)},
            DetectorRow<Scalar>{C(s), C(0, s)}, DetectorRow<Scalar>{C(s), C(0, -s)}};
}

/// Amplitude for detectors a and b to absorb one H and one V photon.
template <class Scalar>
std::complex<Scalar> amp2(const DetectorRow<Scalar>& a, const DetectorRow<Scalar>& b) {
    return a.h * b.v + a.v * b.h;
}

/// Amplitude for detectors a and b to absorb one pair in the superposition
/// of HH and VV with relative phase 2 phi.
template <class Scalar>
std::complex<Scalar> amp2_epr(const DetectorRow<Scalar>& a, const DetectorRow<Scalar>& b,
                              Scalar phi) {
    return a.h * b.h + std::exp(std::complex<Scalar>(0, Scalar(2) * phi)) * a.v * b.v;
}

/// The three ways to split detectors {0,1,2,3} into two pairs.
inline constexpr std::array<std::array<int, 4>, 3> pair_partitions{
    {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};

} // namespace detail

/// Four-fold coincidence of two H+V pairs for the given timing case, from
/// explicit enumeration of the pairing amplitudes: intensities summed over
/// the six pair-to-time assignments (TwoByTwo), amplitudes summed before
/// squaring (FourByOne), or single photons routed independently (OneByFour).
/// The values are exactly 1, 0, and 3/2.
template <class Scalar = double>
Scalar g4_typeII(PairTimingCase timing) {
    using C = std::complex<Scalar>;
    const auto rows = detail::analyzer_rows<Scalar>();

    if (timing == PairTimingCase::OneByFour) {
        // Two H and two V photons, all at distinct times: every photon picks
        // a detector independently, intensities multiply.
        std::array<int, 4> dets{0, 1, 2, 3};
        std::sort(dets.begin(), dets.end());
        Scalar acc = 0;
        do {
            const Scalar p = std::norm(rows[static_cast<std::size_t>(dets[0])].h) *
                             std::norm(rows[static_cast<std::size_t>(dets[1])].h) *
                             std::norm(rows[static_cast<std::size_t>(dets[2])].v) *
                             std::norm(rows[static_cast<std::size_t>(dets[3])].v);
            acc += p;
        } while (std::next_permutation(dets.begin(), dets.end()));
        return acc;
    }

    Scalar intensity = 0;
    C amplitude(0);
    for (const auto& part : detail::pair_partitions) {
        const C first = detail::amp2(rows[static_cast<std::size_t>(part[0])],
                                     rows[static_cast<std::size_t>(part[1])]);
        const C second = detail::amp2(rows[static_cast<std::size_t>(part[2])],
                                      rows[static_cast<std::size_t>(part[3])]);
        // Either pair can be the early one: two assignments per partition.
        intensity += Scalar(2) * std::norm(first * second);
        amplitude += Scalar(2) * first * second;
    }
    return timing == PairTimingCase::TwoByTwo ? intensity : std::norm(amplitude);
}

/// Four-fold fringe of two HH+VV pairs versus the pump phase phi. Pairing
/// amplitudes are combined incoherently (TwoByTwo) or coherently (FourByOne);
/// the overall constant matches the reference normalization in which the
/// TwoByTwo curve is 14(1 - (3/7) cos 4 phi) and the FourByOne curve
/// 18(1 - cos 4 phi). No closed form exists for OneByFour.
template <class Scalar = double>
Scalar g4_epr_fringe(PairTimingCase timing, Scalar phi) {
    using C = std::complex<Scalar>;
    if (timing == PairTimingCase::OneByFour)
        throw UnsupportedCase("no pair-phase fringe for fully separated photons");
    const auto rows = detail::analyzer_rows<Scalar>();

    Scalar intensity = 0;
    C amplitude(0);
    for (const auto& part : detail::pair_partitions) {
        const C product = Scalar(4) *
                          detail::amp2_epr(rows[static_cast<std::size_t>(part[0])],
                                           rows[static_cast<std::size_t>(part[1])], phi) *
                          detail::amp2_epr(rows[static_cast<std::size_t>(part[2])],
                                           rows[static_cast<std::size_t>(part[3])], phi);
        intensity += std::norm(product);
        amplitude += product;
    }
    return timing == PairTimingCase::TwoByTwo ? intensity : std::norm(amplitude);
}

/// (max - min) / (max + min) of a sampled fringe. The curve must cover at
/// least one full period for the result to mean anything.
template <class Scalar>
Scalar fringe_visibility(const std::vector<Scalar>& curve) {
    if (curve.empty()) throw OutOfRange("empty fringe curve");
    const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
    const Scalar sum = *hi + *lo;
    if (sum == Scalar(0)) throw FlatCurve("fringe has no counts");
    return (*hi - *lo) / sum;
}

} // namespace noonsim
