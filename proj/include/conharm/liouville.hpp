#pragma once

#include "conharm/radial_solver.hpp"
#include "conharm/warping.hpp"

#include <cmath>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace conharm {

enum class BoundRegime { General, NonnegCurvature };
enum class DivergenceVerdict { Diverges, Inconclusive };

std::string to_string(BoundRegime regime);
std::string to_string(DivergenceVerdict verdict);

/// lambda1^2 * min{1/(sqrt(2) lambda1), 1/2}: lambda1/sqrt(2) for
/// lambda1 >= sqrt(2), lambda1^2/2 below.
double bound_prefactor(double lambda1);

/// Exponent of r in A(r) for phi = r: prefactor / (n - 2). n = 2 is rejected.
double euclidean_exponent(int n, double lambda1);

/// Growth bound A(r) = exp(prefactor * I(r)), with
///   General:          I(r) = int_1^r phi^{1-n}(s) int_0^s phi^{n-3}(t) dt ds
///   NonnegCurvature:  I(r) = int_1^r ds / phi(s)
///
/// All arithmetic is in log space. Construction integrates I on a geometric
/// node table over [1, r_cache_max]; the general regime runs an adaptive
/// inner quadrature at every outer quadrature point, restarted from the
/// cached inner integral at the enclosing node. Queries between nodes add one
/// more adaptive piece, so values are not interpolated.
///
/// Using a regime whose curvature hypothesis the probe classifier does not
/// confirm is allowed; applicability_warning() then says so.
class GrowthBound {
public:
    struct Node {
        double r;
        double log_A;
        double log_inner; // log int_0^r phi^{n-3}; general regime only
    };

    GrowthBound(BoundRegime regime, int n, double lambda1, WarpingFunction w,
                std::optional<double> r_cache_max = std::nullopt, int nodes_per_decade = 16);

    BoundRegime regime() const { return regime_; }
    int dimension() const { return n_; }
    double lambda1() const { return lambda1_; }
    double prefactor() const { return prefactor_; }
    const WarpingFunction& warping() const { return warping_; }
    double r_cache_max() const { return nodes_.back().r; }
    std::span<const Node> cache() const { return nodes_; }
    const std::optional<std::string>& applicability_warning() const { return warning_; }

    // log A(r) for 1 <= r <= r_cache_max.
    double log_value(double r) const;
    double value(double r) const { return std::exp(log_value(r)); }

private:
    double outer_piece(const Node& from, double to) const;
    double log_inner_piece(double a, double b) const;

    BoundRegime regime_;
    int n_;
    double lambda1_;
    double prefactor_;
    WarpingFunction warping_;
    std::vector<Node> nodes_;
    std::optional<std::string> warning_;
};

double growth_bound_general(int n, double lambda1, const WarpingFunction& w, double r);
double growth_bound_general_log(int n, double lambda1, const WarpingFunction& w, double r);
double growth_bound_nonneg(int n, double lambda1, const WarpingFunction& w, double r);
double growth_bound_nonneg_log(int n, double lambda1, const WarpingFunction& w, double r);

struct DivergenceReport {
    DivergenceVerdict verdict;
    double log_A_max;          // log A(r_probe_max)
    double last_increment;     // over the last decade
    double previous_increment; // over the decade before
    std::vector<double> radii;
    std::vector<double> log_A;
};

inline constexpr double kDivergenceThreshold = 50.0;

/// Diverges when log A(r_probe_max) exceeds the threshold and the increment
/// of log A over the last decade has not shrunk relative to the decade
/// before (relative tolerance 1e-6). Numerical evidence, not proof.
DivergenceReport divergence_verdict(const GrowthBound& bound, double r_probe_max,
                                    double threshold = kDivergenceThreshold);

struct ModeDominance {
    std::size_t index; // position in the profile list
    double lambda_sq;
    double gamma;
    std::vector<double> log_phi;
    std::vector<double> gap; // log phi_m(R) - log A(R)
    bool eventually_increasing;
    bool boundary_case; // gap identically zero within tolerance
    double margin;      // gap at the largest R
};

struct DominanceReport {
    std::vector<double> R;
    std::vector<double> log_A;
    std::vector<ModeDominance> modes;
    bool all_dominant;
    double min_margin;

    // CSV `R,log_A,log_phi_<i>...,gap_<i>...`.
    void write_csv(std::ostream& out) const;
};

/// Tabulates log phi_m(R) - log A(R) for every profile with lambda^2 > 0.
/// A mode counts as dominant when the gap increases over the last half of
/// R_grid; a gap that is identically zero is flagged as a boundary case.
DominanceReport dominance_check(const GrowthBound& bound, std::span<const RadialProfile> profiles,
                                std::span<const double> R_grid);

} // namespace conharm
