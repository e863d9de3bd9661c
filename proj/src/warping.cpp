#include "conharm/warping.hpp"

#include "conharm/csv.hpp"
#include "conharm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace conharm {

namespace {

constexpr double kTabulatedFirstNodeMax = 1.0e-3;
constexpr double kTipValueTol = 1.0e-6;
constexpr double kTipSlopeTol = 1.0e-4;
constexpr double kCurvatureZeroTol = 1.0e-12;

// log(sinh r) without overflow for large r.
double log_sinh(double r) {
    if (r < 1.0) return std::log(std::sinh(r));
    return r + std::log1p(-std::exp(-2.0 * r)) - std::numbers::ln2;
}

void require_positive_r_max(double r_max) {
    if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ConfigError("warping: r_max must be positive and finite");
}

} // namespace

std::string to_string(WarpingKind kind) {
    switch (kind) {
    case WarpingKind::Euclidean: return "euclidean";
    case WarpingKind::Hyperbolic: return "hyperbolic";
    case WarpingKind::Bounded: return "bounded";
    case WarpingKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

std::string to_string(CurvatureSign sign) {
    switch (sign) {
    case CurvatureSign::Nonnegative: return "nonnegative";
    case CurvatureSign::Nonpositive: return "nonpositive";
    case CurvatureSign::Mixed: return "mixed";
    }
    return "unknown";
}

WarpingFunction WarpingFunction::euclidean(double r_max) {
    require_positive_r_max(r_max);
    return {WarpingKind::Euclidean, r_max};
}

WarpingFunction WarpingFunction::hyperbolic(double r_max) {
    require_positive_r_max(r_max);
    return {WarpingKind::Hyperbolic, r_max};
}

WarpingFunction WarpingFunction::bounded(double r_max) {
    require_positive_r_max(r_max);
    return {WarpingKind::Bounded, r_max};
}

WarpingFunction WarpingFunction::from_name(std::string_view name, double r_max) {
    if (name == "euclidean") return euclidean(r_max);
    if (name == "hyperbolic") return hyperbolic(r_max);
    if (name == "bounded") return bounded(r_max);
    throw ConfigError("warping: unknown kind '" + std::string(name) + "'");
}

WarpingFunction WarpingFunction::with_r_max(double r_max) const {
    if (kind_ == WarpingKind::Tabulated) throw CapabilityError("warping: cannot change r_max of a tabulated warping");
    require_positive_r_max(r_max);
    return {kind_, r_max};
}

WarpingFunction WarpingFunction::tabulated(std::vector<WarpingSample> samples) {
    if (samples.size() < 2) throw ValidationError("warping: tabulated warping needs at least two rows");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].r > samples[i - 1].r)) throw ValidationError("warping: tabulated r must be strictly increasing");
    const auto& first = samples.front();
    if (first.r < 0.0 || first.r > kTabulatedFirstNodeMax)
        throw ValidationError("warping: first tabulated r must lie in [0, 1e-3]");
    for (const auto& s : samples) {
        if (!std::isfinite(s.phi) || !std::isfinite(s.dphi) || !std::isfinite(s.d2phi))
            throw ValidationError("warping: non-finite tabulated value");
        if (s.r > 0.0 && !(s.phi > 0.0)) throw ValidationError("warping: phi must be positive for r > 0");
    }

    // Taylor extrapolation of the first row to the tip.
    const double h = first.r;
    const double phi0 = first.phi - h * first.dphi + 0.5 * h * h * first.d2phi;
    const double dphi0 = first.dphi - h * first.d2phi;
    if (std::abs(phi0) > kTipValueTol || std::abs(dphi0 - 1.0) > kTipSlopeTol)
        throw ValidationError("warping: tabulated data violates phi(0) = 0, phi'(0) = 1");

    // phi''(0) from a cubic Taylor model through phi(h) and phi''(h).
    if (first.r > 0.0) {
        const double d2phi0 = 3.0 * (first.phi - h) / (h * h) - 0.5 * first.d2phi;
        samples.insert(samples.begin(), WarpingSample{0.0, 0.0, 1.0, d2phi0});
    }

    WarpingFunction w(WarpingKind::Tabulated, samples.back().r);
    w.table_ = std::make_shared<const std::vector<WarpingSample>>(std::move(samples));
    return w;
}

WarpingFunction WarpingFunction::from_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const int cr = table.column("r");
    const int cp = table.column("phi");
    const int cd = table.column("phi_p");
    const int cdd = table.column("phi_pp");
    if (cr < 0 || cp < 0 || cd < 0 || cdd < 0)
        throw ValidationError("warping: csv header must be r,phi,phi_p,phi_pp");
    std::vector<WarpingSample> samples;
    samples.reserve(table.rows.size());
    for (const auto& row : table.rows)
        samples.push_back({csv::to_double(row[cr]), csv::to_double(row[cp]), csv::to_double(row[cd]),
                           csv::to_double(row[cdd])});
    return tabulated(std::move(samples));
}

const std::vector<WarpingSample>& WarpingFunction::table() const {
    if (!table_) throw CapabilityError("warping: only tabulated warpings carry a table");
    return *table_;
}

void WarpingFunction::check_domain(double r) const {
    if (!(r >= 0.0)) throw DomainError("warping: r must be nonnegative");
    if (r > r_max_) throw DomainError("warping: r = " + csv::format(r) + " exceeds r_max = " + csv::format(r_max_));
}

WarpingValue WarpingFunction::interpolate(double r) const {
    const auto& t = *table_;
    auto it = std::upper_bound(t.begin(), t.end(), r, [](double x, const WarpingSample& s) { return x < s.r; });
    if (it == t.end()) --it;
    if (it == t.begin()) ++it;
    const auto& a = *(it - 1);
    const auto& b = *it;
    const double h = b.r - a.r;
    const double s = (r - a.r) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

    // Quintic Hermite basis on [0, 1].
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h3 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 0.5 * (s3 - 2 * s4 + s5);

    const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double d2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4);
    const double d3 = -d0;
    const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
    const double d5 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);

    const double e0 = -60 * s + 180 * s2 - 120 * s3;
    const double e1 = -36 * s + 96 * s2 - 60 * s3;
    const double e2 = 0.5 * (2 - 18 * s + 36 * s2 - 20 * s3);
    const double e3 = -e0;
    const double e4 = -24 * s + 84 * s2 - 60 * s3;
    const double e5 = 0.5 * (6 * s - 24 * s2 + 20 * s3);

    const double hd0 = h * a.dphi, hd1 = h * b.dphi;
    const double hh0 = h * h * a.d2phi, hh1 = h * h * b.d2phi;
    return {
        a.phi * h0 + hd0 * h1 + hh0 * h2 + b.phi * h3 + hd1 * h4 + hh1 * h5,
        (a.phi * d0 + hd0 * d1 + hh0 * d2 + b.phi * d3 + hd1 * d4 + hh1 * d5) / h,
        (a.phi * e0 + hd0 * e1 + hh0 * e2 + b.phi * e3 + hd1 * e4 + hh1 * e5) / (h * h),
    };
}

WarpingValue WarpingFunction::eval(double r) const {
    check_domain(r);
    switch (kind_) {
    case WarpingKind::Euclidean: return {r, 1.0, 0.0};
    case WarpingKind::Hyperbolic: {
        const double s = std::sinh(r);
        return {s, std::cosh(r), s};
    }
    case WarpingKind::Bounded: {
        const double q = 1.0 / (1.0 + r);
        return {r * q, q * q, -2.0 * q * q * q};
    }
    case WarpingKind::Tabulated: return interpolate(r);
    }
    throw CapabilityError("warping: unknown kind");
}

double WarpingFunction::log_phi(double r) const {
    check_domain(r);
    if (!(r > 0.0)) throw DomainError("warping: log phi requires r > 0");
    switch (kind_) {
    case WarpingKind::Euclidean: return std::log(r);
    case WarpingKind::Hyperbolic: return log_sinh(r);
    case WarpingKind::Bounded: return std::log(r) - std::log1p(r);
    case WarpingKind::Tabulated: return std::log(interpolate(r).phi);
    }
    throw CapabilityError("warping: unknown kind");
}

double WarpingFunction::log_derivative(double r) const {
    check_domain(r);
    if (!(r > 0.0)) throw DomainError("warping: phi'/phi requires r > 0");
    switch (kind_) {
    case WarpingKind::Euclidean: return 1.0 / r;
    case WarpingKind::Hyperbolic: return 1.0 / std::tanh(r);
    case WarpingKind::Bounded: return 1.0 / (r * (1.0 + r));
    case WarpingKind::Tabulated: {
        const auto v = interpolate(r);
        return v.dphi / v.phi;
    }
    }
    throw CapabilityError("warping: unknown kind");
}

double WarpingFunction::radius_over_phi(double r) const {
    check_domain(r);
    if (r == 0.0) return 1.0;
    switch (kind_) {
    case WarpingKind::Euclidean: return 1.0;
    case WarpingKind::Hyperbolic: return r < 700.0 ? r / std::sinh(r) : std::exp(std::log(r) - log_sinh(r));
    case WarpingKind::Bounded: return 1.0 + r;
    case WarpingKind::Tabulated: return r / interpolate(r).phi;
    }
    throw CapabilityError("warping: unknown kind");
}

double WarpingFunction::tip_second_derivative() const {
    return eval(0.0).d2phi;
}

double radial_curvature(const WarpingFunction& w, double r) {
    if (!(r > 0.0)) throw DomainError("radial_curvature: r must be positive (quotient indeterminate at the tip)");
    if (w.kind() == WarpingKind::Euclidean) {
        w.eval(r);
        return 0.0;
    }
    if (w.kind() == WarpingKind::Hyperbolic) {
        w.eval(r);
        return -1.0;
    }
    const auto v = w.eval(r);
    return -v.d2phi / v.phi;
}

CurvatureSign classify_curvature(const WarpingFunction& w, int r_probe_count) {
    if (r_probe_count < 16) throw ConfigError("classify_curvature: r_probe_count must be >= 16");
    const double hi = w.r_max();
    const double lo = hi * 1.0e-6;
    const double ratio = std::log(hi / lo) / (r_probe_count - 1);
    bool any_positive = false; // phi'' > 0 (K < 0)
    bool any_negative = false; // phi'' < 0 (K > 0)
    for (int i = 0; i < r_probe_count; ++i) {
        const double r = i + 1 == r_probe_count ? hi : lo * std::exp(ratio * i);
        const double d2 = w.eval(r).d2phi;
        if (d2 > kCurvatureZeroTol) any_positive = true;
        if (d2 < -kCurvatureZeroTol) any_negative = true;
    }
    if (!any_negative) return CurvatureSign::Nonpositive;
    if (!any_positive) return CurvatureSign::Nonnegative;
    return CurvatureSign::Mixed;
}

} // namespace conharm
