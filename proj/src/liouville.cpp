#include "conharm/liouville.hpp"

#include "conharm/csv.hpp"
#include "conharm/errors.hpp"
#include "conharm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace conharm {

namespace {

constexpr double kTipCutoff = 1.0e-6; // phi(t) ~ t below this radius
constexpr double kInnerRelTol = 1.0e-13;
constexpr double kOuterRelTol = 1.0e-12;
constexpr double kIncrementRelTol = 1.0e-6;

double log_add_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(-std::abs(x - y)));
}

bool is_flat(const WarpingFunction& w) {
    // classify_curvature reports flat warpings as Nonpositive; recheck.
    if (w.kind() == WarpingKind::Euclidean) return true;
    if (w.kind() != WarpingKind::Tabulated) return false;
    for (const auto& s : w.table())
        if (std::abs(s.d2phi) > 1e-12) return false;
    return true;
}

} // namespace

std::string to_string(BoundRegime regime) {
    return regime == BoundRegime::General ? "general" : "nonneg";
}

std::string to_string(DivergenceVerdict verdict) {
    return verdict == DivergenceVerdict::Diverges ? "diverges" : "inconclusive";
}

double bound_prefactor(double lambda1) {
    if (!(lambda1 > 0.0)) throw ConfigError("growth bound: lambda1 must be positive");
    return lambda1 * lambda1 * std::min(1.0 / (std::numbers::sqrt2 * lambda1), 0.5);
}

double euclidean_exponent(int n, double lambda1) {
    if (n == 2) throw CapabilityError("euclidean_exponent: the bound carries a 1/(n-2) factor; n = 2 unsupported");
    if (n < 3) throw ConfigError("euclidean_exponent: n must be >= 3");
    return bound_prefactor(lambda1) / (n - 2);
}

GrowthBound::GrowthBound(BoundRegime regime, int n, double lambda1, WarpingFunction w,
                         std::optional<double> r_cache_max, int nodes_per_decade)
    : regime_(regime), n_(n), lambda1_(lambda1), prefactor_(bound_prefactor(lambda1)), warping_(std::move(w)) {
    if (regime_ == BoundRegime::General && n_ < 3) throw ConfigError("growth bound: general regime requires n >= 3");
    if (n_ < 2) throw ConfigError("growth bound: n must be >= 2");
    const double top = r_cache_max.value_or(warping_.r_max());
    if (top < 1.0) throw ConfigError("growth bound: cache must reach r >= 1");
    if (top > warping_.r_max()) throw DomainError("growth bound: cache radius exceeds the warping's r_max");

    const auto sign = classify_curvature(warping_);
    if (regime_ == BoundRegime::General && sign != CurvatureSign::Nonpositive)
        warning_ = "general bound assumes phi' >= 1 (nonpositive radial curvature); probe classifier reports " +
                   to_string(sign);
    if (regime_ == BoundRegime::NonnegCurvature && sign != CurvatureSign::Nonnegative && !is_flat(warping_))
        warning_ = "simplified bound assumes nonnegative radial curvature; probe classifier reports " + to_string(sign);

    Node first{1.0, 0.0, -std::numeric_limits<double>::infinity()};
    if (regime_ == BoundRegime::General) {
        const double tip = std::pow(kTipCutoff, n_ - 2) / (n_ - 2);
        first.log_inner = log_add_exp(std::log(tip), log_inner_piece(kTipCutoff, 1.0));
    }
    nodes_.push_back(first);
    if (top == 1.0) return;
    const auto grid = geometric_grid(1.0, top, nodes_per_decade);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const Node& prev = nodes_.back();
        Node next{grid[j], prev.log_A + prefactor_ * outer_piece(prev, grid[j]), prev.log_inner};
        if (regime_ == BoundRegime::General) next.log_inner = log_add_exp(prev.log_inner, log_inner_piece(prev.r, grid[j]));
        nodes_.push_back(next);
    }
}

double GrowthBound::log_inner_piece(double a, double b) const {
    if (a == b) return -std::numeric_limits<double>::infinity();
    const double power = n_ - 3.0;
    if (power == 0.0) return std::log(b - a);
    const double scale = power * std::max(warping_.log_phi(a), warping_.log_phi(b));
    const double scaled = quadrature::integrate(
        [&](double t) { return std::exp(power * warping_.log_phi(t) - scale); }, a, b, kInnerRelTol);
    return std::log(scaled) + scale;
}

double GrowthBound::outer_piece(const Node& from, double to) const {
    if (to == from.r) return 0.0;
    if (regime_ == BoundRegime::NonnegCurvature)
        return quadrature::integrate([&](double s) { return std::exp(-warping_.log_phi(s)); }, from.r, to,
                                     kOuterRelTol);
    return quadrature::integrate(
        [&](double s) {
            const double log_inner = log_add_exp(from.log_inner, log_inner_piece(from.r, s));
            return std::exp(log_inner - (n_ - 1) * warping_.log_phi(s));
        },
        from.r, to, kOuterRelTol);
}

double GrowthBound::log_value(double r) const {
    if (!(r >= 1.0)) throw DomainError("growth bound: r must be >= 1");
    if (r > r_cache_max()) throw DomainError("growth bound: r = " + csv::format(r) + " beyond cached range");
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r, [](double x, const Node& n) { return x < n.r; });
    const Node& node = *(it - 1);
    if (node.r == r) return node.log_A;
    return node.log_A + prefactor_ * outer_piece(node, r);
}

double growth_bound_general_log(int n, double lambda1, const WarpingFunction& w, double r) {
    if (!(r >= 1.0)) throw DomainError("growth bound: r must be >= 1");
    return GrowthBound(BoundRegime::General, n, lambda1, w, r).log_value(r);
}

double growth_bound_general(int n, double lambda1, const WarpingFunction& w, double r) {
    return std::exp(growth_bound_general_log(n, lambda1, w, r));
}

double growth_bound_nonneg_log(int n, double lambda1, const WarpingFunction& w, double r) {
    if (!(r >= 1.0)) throw DomainError("growth bound: r must be >= 1");
    return GrowthBound(BoundRegime::NonnegCurvature, n, lambda1, w, r).log_value(r);
}

double growth_bound_nonneg(int n, double lambda1, const WarpingFunction& w, double r) {
    return std::exp(growth_bound_nonneg_log(n, lambda1, w, r));
}

DivergenceReport divergence_verdict(const GrowthBound& bound, double r_probe_max, double threshold) {
    if (r_probe_max > bound.r_cache_max()) throw DomainError("divergence_verdict: r_probe_max beyond cached range");
    if (!(r_probe_max >= 1.0)) throw DomainError("divergence_verdict: r_probe_max must be >= 1");
    DivergenceReport report{DivergenceVerdict::Inconclusive, 0.0, std::nan(""), std::nan(""), {}, {}};
    report.radii = geometric_grid(1.0, r_probe_max, 4);
    for (double r : report.radii) report.log_A.push_back(bound.log_value(r));
    report.log_A_max = report.log_A.back();
    if (r_probe_max < 100.0) return report;
    const double a = bound.log_value(r_probe_max / 100.0);
    const double b = bound.log_value(r_probe_max / 10.0);
    report.previous_increment = b - a;
    report.last_increment = report.log_A_max - b;
    const bool non_shrinking = report.last_increment > 0.0 &&
                               report.last_increment >= report.previous_increment * (1.0 - kIncrementRelTol);
    if (report.log_A_max > threshold && non_shrinking) report.verdict = DivergenceVerdict::Diverges;
    return report;
}

DominanceReport dominance_check(const GrowthBound& bound, std::span<const RadialProfile> profiles,
                                std::span<const double> R_grid) {
    if (R_grid.size() < 2) throw ConfigError("dominance_check: need at least two radii");
    for (std::size_t i = 1; i < R_grid.size(); ++i)
        if (!(R_grid[i] > R_grid[i - 1])) throw ConfigError("dominance_check: R_grid must be strictly increasing");

    DominanceReport report;
    report.R.assign(R_grid.begin(), R_grid.end());
    double log_A_scale = 1.0;
    for (double R : R_grid) {
        report.log_A.push_back(bound.log_value(R));
        log_A_scale = std::max(log_A_scale, std::abs(report.log_A.back()));
    }

    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto& p = profiles[i];
        if (p.dimension() != bound.dimension())
            throw ConfigError("dominance_check: profile dimension does not match the bound");
        if (p.lambda_sq() == 0.0) continue;
        ModeDominance mode{i, p.lambda_sq(), p.indicial_exponent(), {}, {}, true, false, 0.0};
        double max_abs_gap = 0.0;
        for (std::size_t j = 0; j < R_grid.size(); ++j) {
            mode.log_phi.push_back(p.log_value(R_grid[j]));
            mode.gap.push_back(mode.log_phi.back() - report.log_A[j]);
            max_abs_gap = std::max(max_abs_gap, std::abs(mode.gap.back()));
        }
        for (std::size_t j = std::max<std::size_t>(1, R_grid.size() / 2); j < R_grid.size(); ++j)
            if (!(mode.gap[j] - mode.gap[j - 1] > 1e-9 * (1.0 + std::abs(mode.gap[j - 1]))))
                mode.eventually_increasing = false;
        mode.boundary_case = max_abs_gap <= 1e-8 * log_A_scale;
        mode.margin = mode.gap.back();
        report.modes.push_back(std::move(mode));
    }
    report.all_dominant = !report.modes.empty();
    report.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& m : report.modes) {
        if (!m.eventually_increasing || m.boundary_case) report.all_dominant = false;
        report.min_margin = std::min(report.min_margin, m.margin);
    }
    return report;
}

void DominanceReport::write_csv(std::ostream& out) const {
    out << "R,log_A";
    for (const auto& m : modes) out << ",log_phi_" << m.index;
    for (const auto& m : modes) out << ",gap_" << m.index;
    out << '\n';
    for (std::size_t j = 0; j < R.size(); ++j) {
        std::vector<double> row{R[j], log_A[j]};
        for (const auto& m : modes) row.push_back(m.log_phi[j]);
        for (const auto& m : modes) row.push_back(m.gap[j]);
        csv::write_row(out, row);
    }
}

} // namespace conharm
