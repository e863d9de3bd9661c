#include "doctest.h"

#include "conharm/errors.hpp"
#include "conharm/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

using namespace conharm;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Regular n = 3 hyperbolic solution for lambda^2 = 2, normalized at r = 1.
// Written as coth(r)/2 - r/(2 sinh^2 r) so that it stays finite for large r.
double hyperbolic3_raw(double r) { return 0.5 / std::tanh(r) - r / (2.0 * std::sinh(r) * std::sinh(r)); }

} // namespace

TEST_CASE("indicial exponent") {
    CHECK(indicial_exponent(2, 9.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(indicial_exponent(3, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(indicial_exponent(3, 6.0) == doctest::Approx(2.0).epsilon(1e-15));
    for (int n = 2; n <= 10; ++n)
        for (int m = 0; m <= 8; ++m) CHECK(indicial_exponent(n, m * (m + n - 2.0)) == doctest::Approx(m).epsilon(1e-14));
    CHECK(indicial_exponent(4, 0.0) == 0.0);
    CHECK(indicial_exponent(3, 1e-20) > 0.0);
}

TEST_CASE("2-D closed form examples") {
    const auto e = WarpingFunction::euclidean();
    const auto h = WarpingFunction::hyperbolic();
    const auto b = WarpingFunction::bounded();
    CHECK(closed_form_2d(e, 1, std::exp(1.0)) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(closed_form_2d(h, 3, 1.0) == 1.0);
    CHECK(closed_form_2d(b, 1, 2.0) == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-12));
    CHECK(closed_form_2d(e, 0, 5.0) == 1.0);
    CHECK(closed_form_2d_log(h, 2, 700.0) == doctest::Approx(2.0 * std::log(std::tanh(350.0) / std::tanh(0.5))).epsilon(1e-12));
}

TEST_CASE("Euclidean profiles are power laws") {
    const auto e = WarpingFunction::euclidean();
    const std::vector<double> grid{0.5, 2.0, 10.0};
    const auto p = solve_profile(e, 3, 6.0, grid);
    CHECK(std::exp(p.log_value(2.0)) == doctest::Approx(4.0).epsilon(1e-14));
    const auto p3 = solve_profile(e, 2, 9.0, grid);
    CHECK(std::exp(p3.log_value(2.0)) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(p3.log_value(0.0) == -std::numeric_limits<double>::infinity());

    const auto zero = solve_profile(e, 4, 0.0, grid);
    for (double r : {0.0, 1e-3, 0.7, 3.0, 10.0}) CHECK(zero.log_value(r) == 0.0);
}

TEST_CASE("forced integration matches the Euclidean power law") {
    const auto e = WarpingFunction::euclidean();
    const auto grid = geometric_grid(1e-3, 100.0, 32);
    SolveOptions opts;
    opts.force_integration = true;
    for (int n = 2; n <= 6; ++n)
        for (int m = 1; m <= 4; ++m) {
            const double lsq = m * (m + n - 2.0);
            const auto p = solve_profile(e, n, lsq, grid, opts);
            for (double r : {0.01, 0.3, 1.0, 7.0, 100.0})
                CHECK(std::abs(p.log_value(r) - m * std::log(r)) <= 1e-8 * std::max(1.0, std::abs(m * std::log(r))));
        }
}

TEST_CASE("2-D integrator agrees with the closed forms") {
    const auto grid = geometric_grid(0.1, 100.0, 32);
    for (const auto& w : {WarpingFunction::hyperbolic(), WarpingFunction::bounded()})
        for (int m : {1, 4, 16}) {
            const auto p = solve_profile(w, 2, double(m) * m, grid);
            for (double r : {0.1, 0.55, 1.0, 3.3, 40.0, 100.0}) {
                const double want = closed_form_2d_log(w, m, r);
                CHECK(std::abs(p.log_value(r) - want) <= 1e-8 * std::max(1.0, std::abs(want)));
            }
        }
}

TEST_CASE("analytic oracles") {
    const auto grid = geometric_grid(0.1, 50.0, 32);
    const auto h = WarpingFunction::hyperbolic();
    const auto p = solve_profile(h, 2, 1.0, grid);
    for (double r : {0.1, 0.5, 2.0, 10.0, 50.0})
        CHECK(rel_err(std::exp(p.log_value(r)), std::tanh(r / 2) / std::tanh(0.5)) <= 1e-8);

    const auto b = WarpingFunction::bounded();
    const auto pb = solve_profile(b, 2, 4.0, grid);
    for (double r : {0.1, 0.5, 2.0, 10.0})
        CHECK(std::abs(pb.log_value(r) - 2.0 * (r - 1.0 + std::log(r))) <= 1e-8 * std::max(1.0, 2.0 * std::abs(r - 1.0 + std::log(r))));

    const auto p3 = solve_profile(h, 3, 2.0, grid);
    for (double r : {0.1, 0.5, 2.0, 10.0, 50.0})
        CHECK(rel_err(std::exp(p3.log_value(r)), hyperbolic3_raw(r) / hyperbolic3_raw(1.0)) <= 1e-8);
}

TEST_CASE("profiles satisfy the radial ODE") {
    // Second-order finite differences of phi_m at interior points.
    const auto grid = geometric_grid(0.05, 20.0, 64);
    for (const auto& w : {WarpingFunction::hyperbolic(), WarpingFunction::bounded()})
        for (int n : {2, 3, 5})
            for (double lsq : {1.0, 6.0, 12.0}) {
                const auto p = solve_profile(w, n, lsq, grid);
                for (double r : {0.3, 1.0, 2.5, 6.0}) {
                    const double d = 1e-4 * r;
                    const double f0 = std::exp(p.log_value(r));
                    const double fp = std::exp(p.log_value(r + d));
                    const double fm = std::exp(p.log_value(r - d));
                    const auto v = w.eval(r);
                    const double d1 = (fp - fm) / (2 * d);
                    const double d2 = (fp - 2 * f0 + fm) / (d * d);
                    const double residual = d2 + (n - 1) * v.dphi / v.phi * d1 - lsq / (v.phi * v.phi) * f0;
                    const double scale = std::abs(d2) + std::abs((n - 1) * v.dphi / v.phi * d1) + std::abs(lsq / (v.phi * v.phi) * f0);
                    CHECK(std::abs(residual) <= 1e-6 * std::max(1.0, scale));
                }
            }
}

TEST_CASE("profiles are nondecreasing, ordered by mode") {
    // On the hyperbolic cone with n = 3 the profiles saturate, so v decays to rounding level.
    const auto grid = geometric_grid(1e-3, 100.0, 16);
    for (const auto& w : {WarpingFunction::euclidean(), WarpingFunction::hyperbolic(), WarpingFunction::bounded()}) {
        double prev_at_half = std::numeric_limits<double>::infinity();
        for (int m = 1; m <= 6; ++m) {
            const auto p = solve_profile(w, 3, m * (m + 1.0), grid);
            double last = -std::numeric_limits<double>::infinity();
            for (const auto& s : p.samples()) {
                CHECK(std::isfinite(s.log_phi));
                CHECK(s.log_phi >= last - 1e-14);
                CHECK(s.v >= -1e-12);
                last = s.log_phi;
            }
            // Normalized at 1, higher modes are smaller inside.
            CHECK(p.log_value(0.5) < prev_at_half);
            prev_at_half = p.log_value(0.5);
        }
    }
}

TEST_CASE("hyperbolic profiles stay finite far out") {
    const auto h = WarpingFunction::hyperbolic(1000.0);
    const auto grid = geometric_grid(1e-3, 1000.0, 16);
    const auto p = solve_profile(h, 3, 2.0, grid);
    CHECK(std::isfinite(p.log_value(1000.0)));
    CHECK(rel_err(p.log_value(800.0), std::log(hyperbolic3_raw(800.0) / hyperbolic3_raw(1.0))) <= 1e-8);
}

TEST_CASE("re-anchoring and ratios") {
    const auto h = WarpingFunction::hyperbolic();
    const auto grid = geometric_grid(0.01, 10.0, 32);
    const auto p = solve_profile(h, 3, 6.0, grid);
    const auto q = p.reanchored(2.0);
    CHECK(std::abs(q.log_value(2.0)) <= 1e-14);
    for (double r : {0.1, 1.0, 5.0}) CHECK(q.log_value(r) - p.log_value(r) == doctest::Approx(-p.log_value(2.0)).epsilon(1e-13));
    CHECK(profile_ratio(p, 1.0, 2.0) == doctest::Approx(std::exp(-p.log_value(2.0))).epsilon(1e-14));
    CHECK(profile_ratio(p, 0.0, 2.0) == 0.0);
}

TEST_CASE("profile CSV output") {
    const auto p = solve_profile(WarpingFunction::euclidean(), 2, 1.0, std::vector<double>{0.5, 2.0});
    std::ostringstream out;
    p.write_csv(out);
    const std::string text = out.str();
    CHECK(text.rfind("r,log_phi_m,v\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + static_cast<long>(p.samples().size()));
}

TEST_CASE("solver input validation") {
    const auto e = WarpingFunction::euclidean();
    const std::vector<double> grid{2.0};
    CHECK_THROWS_AS(solve_profile(e, 1, 1.0, grid), ConfigError);
    CHECK_THROWS_AS(solve_profile(e, 3, -1.0, grid), ValidationError);
    CHECK_THROWS_AS(solve_profile(WarpingFunction::hyperbolic(0.5), 3, 2.0, std::vector<double>{0.2}), ConfigError);
    const auto p = solve_profile(e, 3, 2.0, grid);
    CHECK_THROWS_AS(p.log_value(3.0), DomainError);
    CHECK_THROWS_AS(p.log_value(-1.0), DomainError);
}

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(1e-2, 1e2, 4);
    CHECK(g.front() == 1e-2);
    CHECK(g.back() == 1e2);
    CHECK(g.size() == 17);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}
