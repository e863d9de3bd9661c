#pragma once

#include "conharm/warping.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace conharm {

struct ProfileSample {
    double r;
    double log_phi; // log phi_m(r)
    double v;       // phi_m'(r) / phi_m(r)
    double dw = 0.0; // d(r v)/d(ln r), from the Riccati right-hand side
};

/// Regular solution phi_m of
///   phi_m'' + (n-1)(phi'/phi) phi_m' - (lambda^2/phi^2) phi_m = 0,
/// stored in log space on a radial grid and normalized so that
/// log phi_m(anchor) = 0 (anchor r = 1 unless reanchored).
///
/// Between grid nodes log phi_m is a quintic Hermite interpolant in ln r
/// matching the value, r*v and its ln r derivative at both ends; below the first node it follows the tip asymptotics
/// phi_m ~ c r^gamma.
class RadialProfile {
public:
    RadialProfile(double lambda_sq, int n, double gamma, std::vector<ProfileSample> samples);

    double lambda_sq() const { return lambda_sq_; }
    int dimension() const { return n_; }
    double indicial_exponent() const { return gamma_; }
    std::span<const ProfileSample> samples() const { return samples_; }
    double r_min() const { return samples_.front().r; }
    double r_max() const { return samples_.back().r; }

    // log phi_m(r) for 0 <= r <= r_max; -inf at r = 0 when gamma > 0.
    double log_value(double r) const;

    // Same profile with log phi_m(r_anchor) = 0.
    RadialProfile reanchored(double r_anchor) const;

    // CSV `r,log_phi_m,v`.
    void write_csv(std::ostream& out) const;

private:
    double lambda_sq_;
    int n_;
    double gamma_;
    std::vector<ProfileSample> samples_;
};

/// Positive root of gamma^2 + (n-2) gamma - lambda^2 = 0.
double indicial_exponent(int n, double lambda_sq);

struct SolveOptions {
    // Use the Riccati integrator even when a closed form exists (Euclidean).
    bool force_integration = false;
    double r_start = 1.0e-4;
    double rel_tol = 1.0e-10;
    double abs_tol = 1.0e-12;
};

/// Integrates the Riccati form v' = lambda^2/phi^2 - v^2 - (n-1)(phi'/phi) v
/// of the radial equation from the tip with adaptive step control, starting
/// from the Frobenius expansion v ~ gamma/r + (next-order term).
///
/// The stored grid is r_start together with every point of r_grid and the
/// anchor r = 1. For the Euclidean warping the exact power law gamma*log r is
/// returned unless options.force_integration is set.
RadialProfile solve_profile(const WarpingFunction& w, int n, double lambda_sq, std::span<const double> r_grid,
                            const SolveOptions& options = {});

/// phi_m(r) / phi_m(R) = exp(log phi_m(r) - log phi_m(R)), never forming
/// phi_m(R) itself.
double profile_ratio(const RadialProfile& p, double r, double R);

/// Two-dimensional closed form log phi_m(r) = m * integral_1^r ds/phi(s),
/// by adaptive quadrature in ln s.
double closed_form_2d_log(const WarpingFunction& w, int m, double r);
double closed_form_2d(const WarpingFunction& w, int m, double r);

/// Geometric grid from lo to hi (both included) with the given number of
/// points per decade.
std::vector<double> geometric_grid(double lo, double hi, int per_decade);

} // namespace conharm
