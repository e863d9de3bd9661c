#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace conharm {

inline constexpr double kDefaultRMax = 1.0e3;

enum class WarpingKind { Euclidean, Hyperbolic, Bounded, Tabulated };

enum class CurvatureSign { Nonnegative, Nonpositive, Mixed };

std::string to_string(WarpingKind kind);
std::string to_string(CurvatureSign sign);

struct WarpingValue {
    double phi;
    double dphi;
    double d2phi;
};

// One row of a tabulated warping: r, phi, phi', phi''.
struct WarpingSample {
    double r;
    double phi;
    double dphi;
    double d2phi;
};

/// Warping function phi of the cone metric dr^2 + phi(r)^2 g_N.
///
/// Built-in kinds are evaluated in closed form. Tabulated warpings use a
/// piecewise quintic Hermite interpolant through (phi, phi', phi'') so that
/// phi is C^2 and all three returned values are mutually consistent.
///
/// Besides eval(), the class exposes overflow-safe helpers (log phi,
/// phi'/phi, r/phi). sinh(r) overflows a double near r = 710 while its
/// logarithm does not, and the radial and growth-bound integrators only ever
/// need these combinations.
///
/// Immutable; safe to share across threads.
class WarpingFunction {
public:
    static WarpingFunction euclidean(double r_max = kDefaultRMax);
    static WarpingFunction hyperbolic(double r_max = kDefaultRMax);
    static WarpingFunction bounded(double r_max = kDefaultRMax);

    // Validates the table: at least two rows, strictly increasing r with the
    // first r <= 1e-3, phi > 0 for r > 0, and phi(0) = 0, phi'(0) = 1 by
    // Taylor extrapolation from the first row.
    static WarpingFunction tabulated(std::vector<WarpingSample> samples);

    // CSV with header `r,phi,phi_p,phi_pp`.
    static WarpingFunction from_csv(const std::filesystem::path& path);

    // "euclidean" | "hyperbolic" | "bounded"
    static WarpingFunction from_name(std::string_view name, double r_max = kDefaultRMax);

    WarpingKind kind() const { return kind_; }
    double r_max() const { return r_max_; }
    std::string name() const { return to_string(kind_); }

    // Same warping with a different evaluation limit (built-in kinds only).
    WarpingFunction with_r_max(double r_max) const;

    WarpingValue eval(double r) const;

    double log_phi(double r) const;         // r > 0
    double log_derivative(double r) const;  // phi'/phi, r > 0
    double radius_over_phi(double r) const; // r/phi, equals 1 at r = 0

    // phi''(0); zero for odd warpings (Euclidean, Hyperbolic).
    double tip_second_derivative() const;

    const std::vector<WarpingSample>& table() const;

private:
    WarpingFunction(WarpingKind kind, double r_max) : kind_(kind), r_max_(r_max) {}

    void check_domain(double r) const;
    WarpingValue interpolate(double r) const;

    WarpingKind kind_;
    double r_max_;
    std::shared_ptr<const std::vector<WarpingSample>> table_;
};

/// Radial curvature K(r) = -phi''(r)/phi(r); r = 0 is rejected.
double radial_curvature(const WarpingFunction& w, double r);

/// Sign of phi'' on a geometric probe grid in (0, r_max]. A flat warping
/// (phi'' == 0 everywhere probed) reports Nonpositive. |phi''| <= 1e-12 counts
/// as zero. The verdict is probe-based evidence only.
CurvatureSign classify_curvature(const WarpingFunction& w, int r_probe_count = 64);

} // namespace conharm
