#include "conharm/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <numbers>

namespace conharm::quadrature {

Rule gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
    // legendre_p_zeros returns the nonnegative zeros in ascending order.
    const auto half = boost::math::legendre_p_zeros<double>(n);
    Rule rule;
    for (double x : half) {
        const double dp = boost::math::legendre_p_prime(n, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
        if (x != 0.0) {
            rule.nodes.push_back(-x);
            rule.weights.push_back(w);
        }
    }
    std::vector<std::size_t> order(rule.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    Rule sorted;
    for (auto i : order) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    return sorted;
}

Rule periodic_trapezoid(int n) {
    if (n < 1) throw ConfigError("periodic_trapezoid: n must be >= 1");
    Rule rule;
    const double h = 2.0 * std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(h * i);
        rule.weights.push_back(h);
    }
    return rule;
}

} // namespace conharm::quadrature
