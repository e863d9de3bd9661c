#pragma once

#include "conharm/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace conharm::quadrature {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1], nodes ascending. Exact for
// polynomials of degree <= 2n - 1.
Rule gauss_legendre(int n);

// n-point trapezoid rule on the circle [0, 2pi). Exact for trigonometric
// polynomials of degree < n.
Rule periodic_trapezoid(int n);

inline constexpr double kDefaultRelTol = 1.0e-13;
inline constexpr double kDefaultAbsTol = 1.0e-15;

inline constexpr int kMaxIntervals = 4096;

namespace detail {

struct Piece {
    double a, b, value, error, l1;
};

// One 15-point Gauss-Kronrod panel. Boost reports the error estimate of the
// panel mapped to [-1, 1], so it is rescaled to [a, b] here.
template <class F>
Piece panel(F& f, double a, double b) {
    Piece p{a, b, 0.0, 0.0, 0.0};
    p.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &p.error, &p.l1);
    p.error *= 0.5 * (b - a);
    return p;
}

} // namespace detail

/// Adaptive Gauss-Kronrod (15-point) integral of f over [a, b]; a > b gives
/// the negated integral. The panel with the largest error estimate is
/// bisected until the total estimate is below max(rel_tol*L1, abs_tol).
/// Throws NumericalError when that fails within kMaxIntervals panels.
///
/// Boost's own adaptive driver is not used: in 1.74 it compares unscaled
/// panel errors with scaled tolerances and bisects short intervals to the
/// depth limit.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = kDefaultRelTol, double abs_tol = kDefaultAbsTol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, rel_tol, abs_tol);
    auto worse = [](const detail::Piece& x, const detail::Piece& y) { return x.error < y.error; };
    std::vector<detail::Piece> heap{detail::panel(f, a, b)};
    double value = heap[0].value, error = heap[0].error, l1 = heap[0].l1;
    while (error > std::max(rel_tol * l1, abs_tol) && static_cast<int>(heap.size()) < kMaxIntervals) {
        std::pop_heap(heap.begin(), heap.end(), worse);
        const auto worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        for (const auto& half : {detail::panel(f, worst.a, mid), detail::panel(f, mid, worst.b)}) {
            heap.push_back(half);
            std::push_heap(heap.begin(), heap.end(), worse);
        }
        value = error = l1 = 0.0;
        for (const auto& p : heap) {
            value += p.value;
            error += p.error;
            l1 += p.l1;
        }
    }
    if (!std::isfinite(value) || error > 10.0 * std::max(rel_tol * l1, abs_tol))
        throw NumericalError("quadrature: no convergence on [" + std::to_string(a) + ", " + std::to_string(b) +
                             "], error estimate " + std::to_string(error));
    return value;
}

} // namespace conharm::quadrature
