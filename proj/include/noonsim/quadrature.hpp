#pragma once

#include <cmath>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

/// Nodes and weights of a one-dimensional quadrature rule.
template <class Scalar = double>
struct QuadratureRule {
    std::vector<Scalar> nodes;
    std::vector<Scalar> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Legendre rule on [-1, 1]. Nodes are the Legendre roots found by
/// Newton iteration on the three-term recurrence, seeded with the Chebyshev
/// approximation; weights follow from the derivative at each root.
template <class Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
    if (n < 1) throw OutOfRange("quadrature order must be positive");
    QuadratureRule<Scalar> rule;
    rule.nodes.assign(static_cast<std::size_t>(n), Scalar(0));
    rule.weights.assign(static_cast<std::size_t>(n), Scalar(0));

    const int half = (n + 1) / 2;
    const Scalar pi = Scalar(3.14159265358979323846L);
    for (int k = 0; k < half; ++k) {
        Scalar x = std::cos(pi * (Scalar(k) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p0 = 1, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const Scalar p2 =
                    ((Scalar(2 * j - 1)) * x * p1 - Scalar(j - 1) * p0) / Scalar(j);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = x; p0 = 1; }
            dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
            const Scalar step = p1 / dp;
            x -= step;
            if (std::abs(step) < Scalar(1e-15)) break;
        }
        Scalar p0 = 1, p1 = x;
        for (int j = 2; j <= n; ++j) {
            const Scalar p2 = ((Scalar(2 * j - 1)) * x * p1 - Scalar(j - 1) * p0) / Scalar(j);
            p0 = p1;
            p1 = p2;
        }
        dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
        const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);

        rule.nodes[static_cast<std::size_t>(k)] = -x;
        rule.weights[static_cast<std::size_t>(k)] = w;
        rule.nodes[static_cast<std::size_t>(n - 1 - k)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - k)] = w;
    }
    return rule;
}

/// The same rule mapped affinely onto [a, b].
template <class Scalar>
QuadratureRule<Scalar> scaled_to(const QuadratureRule<Scalar>& rule, Scalar a, Scalar b) {
    if (!(a < b)) throw OutOfRange("quadrature interval must have a < b");
    QuadratureRule<Scalar> out = rule;
    const Scalar mid = (a + b) / Scalar(2);
    const Scalar hw = (b - a) / Scalar(2);
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        out.nodes[i] = mid + hw * out.nodes[i];
        out.weights[i] *= hw;
    }
    return out;
}

} // namespace noonsim
