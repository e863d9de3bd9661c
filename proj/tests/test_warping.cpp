#include "doctest.h"

#include "conharm/errors.hpp"
#include "conharm/radial_solver.hpp"
#include "conharm/warping.hpp"

#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>

using namespace conharm;

namespace {

WarpingFunction sampled_hyperbolic(double r_max, int per_decade) {
    std::vector<WarpingSample> rows;
    for (double r : geometric_grid(1e-3, r_max, per_decade)) rows.push_back({r, std::sinh(r), std::cosh(r), std::sinh(r)});
    return WarpingFunction::tabulated(rows);
}

} // namespace

TEST_CASE("eval returns closed-form values for the built-in warpings") {
    const auto e = WarpingFunction::euclidean().eval(2.0);
    CHECK(e.phi == 2.0);
    CHECK(e.dphi == 1.0);
    CHECK(e.d2phi == 0.0);

    const auto h = WarpingFunction::hyperbolic().eval(1.0);
    CHECK(h.phi == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));
    CHECK(h.dphi == doctest::Approx(std::cosh(1.0)).epsilon(1e-15));
    CHECK(h.d2phi == doctest::Approx(std::sinh(1.0)).epsilon(1e-15));

    const auto b = WarpingFunction::bounded().eval(1.0);
    CHECK(b.phi == 0.5);
    CHECK(b.dphi == 0.25);
    CHECK(b.d2phi == -0.25);
}

TEST_CASE("every warping starts at phi(0) = 0 with unit slope") {
    for (const auto& w : {WarpingFunction::euclidean(), WarpingFunction::hyperbolic(), WarpingFunction::bounded(),
                          sampled_hyperbolic(5.0, 50)}) {
        const auto v = w.eval(0.0);
        CHECK(v.phi == 0.0);
        CHECK(v.dphi == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("eval rejects radii outside [0, r_max]") {
    const auto w = WarpingFunction::euclidean(10.0);
    CHECK_THROWS_AS(w.eval(-1e-9), DomainError);
    CHECK_THROWS_AS(w.eval(10.0 + 1e-9), DomainError);
    CHECK_NOTHROW(w.eval(10.0));
    CHECK(WarpingFunction::bounded().r_max() == kDefaultRMax);
}

TEST_CASE("finite differences reproduce phi' and phi'' on a log grid") {
    for (const auto& w : {WarpingFunction::euclidean(), WarpingFunction::hyperbolic(50.0), WarpingFunction::bounded()}) {
        CAPTURE(w.name());
        for (double r : geometric_grid(1e-3, w.r_max() * 0.999, 8)) {
            const auto v = w.eval(r);
            const double h1 = 1e-4 * std::min(r, 1.0);
            const double fd1 = (w.eval(r + h1).phi - w.eval(r - h1).phi) / (2 * h1);
            CHECK(std::abs(fd1 - v.dphi) <= 1e-6 * std::abs(v.dphi));
            const double h2 = 1e-3 * std::min(r, 1.0);
            const double fd2 = (w.eval(r + h2).phi - 2 * v.phi + w.eval(r - h2).phi) / (h2 * h2);
            const double scale = std::max(std::abs(v.d2phi), std::abs(v.dphi) / std::max(r, 1.0));
            const double roundoff = 64 * std::numeric_limits<double>::epsilon() * v.phi / (h2 * h2);
            CHECK(std::abs(fd2 - v.d2phi) <= 1e-6 * scale + roundoff);
        }
    }
}

TEST_CASE("overflow-safe helpers agree with eval and stay finite past sinh overflow") {
    const auto h = WarpingFunction::hyperbolic(2000.0);
    for (double r : {1e-3, 0.5, 1.0, 3.0, 20.0}) {
        const auto v = h.eval(r);
        CHECK(h.log_phi(r) == doctest::Approx(std::log(v.phi)).epsilon(1e-14));
        CHECK(h.log_derivative(r) == doctest::Approx(v.dphi / v.phi).epsilon(1e-14));
        CHECK(h.radius_over_phi(r) == doctest::Approx(r / v.phi).epsilon(1e-14));
    }
    CHECK(std::isinf(h.eval(1000.0).phi));
    CHECK(h.log_phi(1000.0) == doctest::Approx(1000.0 - std::log(2.0)).epsilon(1e-15));
    CHECK(h.log_derivative(1000.0) == 1.0);
    CHECK(h.radius_over_phi(700.0) == doctest::Approx(1400.0 * std::exp(-700.0)).epsilon(1e-12));
    CHECK(h.radius_over_phi(1000.0) == 0.0); // below the smallest subnormal
    CHECK(h.radius_over_phi(0.0) == 1.0);
}

TEST_CASE("radial curvature is -phi''/phi") {
    for (double r : {1e-3, 0.1, 1.0, 10.0, 999.0}) CHECK(radial_curvature(WarpingFunction::euclidean(), r) == 0.0);
    CHECK(radial_curvature(WarpingFunction::hyperbolic(), 1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(radial_curvature(WarpingFunction::bounded(), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(radial_curvature(WarpingFunction::euclidean(), 0.0), DomainError);
}

TEST_CASE("curvature classification") {
    CHECK(classify_curvature(WarpingFunction::euclidean(), 16) == CurvatureSign::Nonpositive);
    CHECK(classify_curvature(WarpingFunction::hyperbolic(), 32) == CurvatureSign::Nonpositive);
    CHECK(classify_curvature(WarpingFunction::bounded(), 64) == CurvatureSign::Nonnegative);
    CHECK_THROWS_AS(classify_curvature(WarpingFunction::bounded(), 15), ConfigError);

    std::vector<WarpingSample> rows;
    for (double r : geometric_grid(1e-3, 3.0, 40)) rows.push_back({r, std::sin(r) + r * r * r / 3.0,
                                                                   std::cos(r) + r * r, -std::sin(r) + 2.0 * r});
    // -sin r + 2r > 0 on (0, 3]: nonpositive curvature everywhere.
    CHECK(classify_curvature(WarpingFunction::tabulated(rows)) == CurvatureSign::Nonpositive);

    rows.clear();
    for (double r : geometric_grid(1e-3, 3.0, 40))
        rows.push_back({r, r + 0.1 * r * r * r * (r - 2.0), 1.0 + 0.1 * (4 * r * r * r - 6 * r * r),
                        0.1 * (12 * r * r - 12 * r)});
    CHECK(classify_curvature(WarpingFunction::tabulated(rows)) == CurvatureSign::Mixed);
}

TEST_CASE("classification is deterministic") {
    const auto w = WarpingFunction::bounded(123.0);
    const auto first = classify_curvature(w, 40);
    for (int i = 0; i < 5; ++i) CHECK(classify_curvature(w, 40) == first);
}

TEST_CASE("tabulated warping interpolates with consistent derivatives") {
    const auto w = sampled_hyperbolic(5.0, 50);
    CHECK(w.kind() == WarpingKind::Tabulated);
    CHECK(w.r_max() == 5.0);
    for (double r : {0.0005, 0.01, 0.37, 1.0, 2.5, 4.9}) {
        const auto v = w.eval(r);
        // Quintic Hermite error terms scale as h^6, h^5, h^4 with h = 0.23 at r = 4.9.
        CHECK(v.phi == doctest::Approx(std::sinh(r)).epsilon(1e-8));
        CHECK(v.dphi == doctest::Approx(std::cosh(r)).epsilon(1e-7));
        CHECK(std::abs(v.d2phi - std::sinh(r)) <= 1e-5 * std::cosh(r));
    }
    // Nodes are reproduced exactly.
    const auto& t = w.table();
    for (std::size_t i = 0; i < t.size(); i += 17) CHECK(w.eval(t[i].r).phi == t[i].phi);
}

TEST_CASE("tabulated validation") {
    std::vector<WarpingSample> ok{{1e-3, 1e-3, 1.0, 0.0}, {1.0, 1.0, 1.0, 0.0}, {2.0, 2.0, 1.0, 0.0}};
    CHECK_NOTHROW(WarpingFunction::tabulated(ok));

    auto unsorted = ok;
    std::swap(unsorted[1], unsorted[2]);
    CHECK_THROWS_AS(WarpingFunction::tabulated(unsorted), ValidationError);

    std::vector<WarpingSample> late_start{{0.01, 0.01, 1.0, 0.0}, {1.0, 1.0, 1.0, 0.0}};
    CHECK_THROWS_AS(WarpingFunction::tabulated(late_start), ValidationError);

    std::vector<WarpingSample> bad_tip{{1e-3, 0.5, 1.0, 0.0}, {1.0, 1.5, 1.0, 0.0}};
    CHECK_THROWS_AS(WarpingFunction::tabulated(bad_tip), ValidationError);

    std::vector<WarpingSample> bad_slope{{1e-3, 2e-3, 2.0, 0.0}, {1.0, 2.0, 2.0, 0.0}};
    CHECK_THROWS_AS(WarpingFunction::tabulated(bad_slope), ValidationError);

    std::vector<WarpingSample> nonpositive{{1e-3, 1e-3, 1.0, 0.0}, {1.0, -1.0, 1.0, 0.0}};
    CHECK_THROWS_AS(WarpingFunction::tabulated(nonpositive), ValidationError);

    CHECK_THROWS_AS(WarpingFunction::tabulated({ok[0]}), ValidationError);
}

TEST_CASE("tabulated warping loads from CSV") {
    const auto path = std::filesystem::temp_directory_path() / "conharm_warping_test.csv";
    {
        std::ofstream out(path);
        out << "r,phi,phi_p,phi_pp\n";
        for (double r : geometric_grid(1e-3, 10.0, 20)) {
            const double q = 1.0 / (1.0 + r);
            out << r << ',' << r * q << ',' << q * q << ',' << -2 * q * q * q << '\n';
        }
    }
    const auto w = WarpingFunction::from_csv(path);
    CHECK(w.eval(1.0).phi == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(classify_curvature(w) == CurvatureSign::Nonnegative);
    CHECK(w.tip_second_derivative() == doctest::Approx(-2.0).epsilon(1e-2));

    {
        std::ofstream out(path);
        out << "r,phi\n0.001,0.001\n";
    }
    CHECK_THROWS_AS(WarpingFunction::from_csv(path), ValidationError);
    std::filesystem::remove(path);
}

TEST_CASE("from_name") {
    CHECK(WarpingFunction::from_name("hyperbolic", 7.0).kind() == WarpingKind::Hyperbolic);
    CHECK(WarpingFunction::from_name("bounded").r_max() == kDefaultRMax);
    CHECK_THROWS_AS(WarpingFunction::from_name("conical"), ConfigError);
    CHECK_THROWS_AS(WarpingFunction::euclidean(-1.0), ConfigError);
}
