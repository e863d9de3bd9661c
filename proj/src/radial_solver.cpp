#include "conharm/radial_solver.hpp"

#include "conharm/csv.hpp"
#include "conharm/errors.hpp"
#include "conharm/quadrature.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

namespace conharm {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kAnchor = 1.0;

// Quintic Hermite on [t0, t1] matching value, first and second derivative.
double hermite5(double t, double t0, double t1, const std::array<double, 3>& y0, const std::array<double, 3>& y1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double u = 1.0 - s;
    const double s2 = s * s, s3 = s2 * s, u2 = u * u, u3 = u2 * u;
    const double h00 = u3 * (1 + 3 * s + 6 * s2);
    const double h10 = u3 * s * (1 + 3 * s);
    const double h20 = 0.5 * u3 * s2;
    const double h01 = s3 * (1 + 3 * u + 6 * u2);
    const double h11 = -s3 * u * (1 + 3 * u);
    const double h21 = 0.5 * s3 * u2;
    return h00 * y0[0] + h10 * h * y0[1] + h20 * h * h * y0[2] + h01 * y1[0] + h11 * h * y1[1] +
           h21 * h * h * y1[2];
}

std::vector<double> observation_radii(std::span<const double> r_grid, double r_start, double r_max) {
    std::vector<double> radii(r_grid.begin(), r_grid.end());
    for (double r : radii) {
        if (!(r > 0.0)) throw DomainError("solve_profile: grid radii must be positive");
        if (r > r_max) throw DomainError("solve_profile: grid radius " + csv::format(r) + " exceeds r_max");
    }
    radii.push_back(r_start);
    radii.push_back(kAnchor);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    return radii;
}

} // namespace

RadialProfile::RadialProfile(double lambda_sq, int n, double gamma, std::vector<ProfileSample> samples)
    : lambda_sq_(lambda_sq), n_(n), gamma_(gamma), samples_(std::move(samples)) {
    if (samples_.empty()) throw ConfigError("RadialProfile: empty grid");
}

double RadialProfile::log_value(double r) const {
    if (!(r >= 0.0)) throw DomainError("RadialProfile: r must be nonnegative");
    if (r > r_max()) throw DomainError("RadialProfile: r = " + csv::format(r) + " beyond profile grid end " +
                                       csv::format(r_max()));
    const auto& first = samples_.front();
    if (r <= first.r) {
        if (gamma_ == 0.0) return first.log_phi;
        if (r == 0.0) return -std::numeric_limits<double>::infinity();
        return first.log_phi + gamma_ * std::log(r / first.r);
    }
    auto it = std::lower_bound(samples_.begin(), samples_.end(), r,
                               [](const ProfileSample& s, double x) { return s.r < x; });
    if (it->r == r) return it->log_phi;
    const auto& a = *(it - 1);
    const auto& b = *it;
    return hermite5(std::log(r), std::log(a.r), std::log(b.r), {a.log_phi, a.r * a.v, a.dw},
                    {b.log_phi, b.r * b.v, b.dw});
}

RadialProfile RadialProfile::reanchored(double r_anchor) const {
    const double shift = log_value(r_anchor);
    auto samples = samples_;
    for (auto& s : samples) s.log_phi -= shift;
    return {lambda_sq_, n_, gamma_, std::move(samples)};
}

void RadialProfile::write_csv(std::ostream& out) const {
    out << "r,log_phi_m,v\n";
    for (const auto& s : samples_) {
        const double row[] = {s.r, s.log_phi, s.v};
        csv::write_row(out, row);
    }
}

double indicial_exponent(int n, double lambda_sq) {
    if (lambda_sq < 0.0) throw ValidationError("indicial_exponent: lambda^2 must be nonnegative");
    if (lambda_sq == 0.0) return 0.0;
    const double b = n - 2.0;
    // Rationalized root avoids cancellation when lambda^2 << (n-2)^2.
    return 2.0 * lambda_sq / (b + std::sqrt(b * b + 4.0 * lambda_sq));
}

RadialProfile solve_profile(const WarpingFunction& w, int n, double lambda_sq, std::span<const double> r_grid,
                            const SolveOptions& options) {
    if (n < 2) throw ConfigError("solve_profile: n must be >= 2");
    if (!(lambda_sq >= 0.0)) throw ValidationError("solve_profile: lambda^2 must be nonnegative");
    if (w.r_max() < kAnchor) throw ConfigError("solve_profile: warping must reach the anchor r = 1");
    double r_start = options.r_start;
    if (!r_grid.empty()) r_start = std::min(r_start, *std::min_element(r_grid.begin(), r_grid.end()));
    const auto radii = observation_radii(r_grid, r_start, w.r_max());
    const double gamma = indicial_exponent(n, lambda_sq);

    std::vector<ProfileSample> samples;
    samples.reserve(radii.size());

    if (lambda_sq == 0.0) {
        for (double r : radii) samples.push_back({r, 0.0, 0.0, 0.0});
        return {lambda_sq, n, gamma, std::move(samples)};
    }
    if (w.kind() == WarpingKind::Euclidean && !options.force_integration) {
        for (double r : radii) samples.push_back({r, gamma * std::log(r), gamma / r, 0.0});
        return {lambda_sq, n, gamma, std::move(samples)};
    }

    // Frobenius start. With phi = r + a r^2 + b r^3 + ..., the regular
    // solution has v = gamma/r + c0 + c1 r + ...; c0 vanishes when a = 0.
    const double rs = radii.front();
    const double a = 0.5 * w.tip_second_derivative();
    double w0 = gamma;
    if (std::abs(a) > 1e-14) {
        w0 += rs * (-a * (2.0 * lambda_sq + (n - 1) * gamma) / (2.0 * gamma + n - 1));
    } else {
        const double b = (w.eval(rs).d2phi - 2.0 * a) / (6.0 * rs);
        w0 += rs * rs * (-2.0 * b * (lambda_sq + (n - 1) * gamma) / (n + 2.0 * gamma));
    }

    // State in t = ln r: s[0] = r v, s[1] = log phi_m.
    using State = std::array<double, 2>;
    const double t_max = std::log(w.r_max());
    auto rhs = [&](const State& s, State& ds, double t) {
        const double r = t >= t_max ? w.r_max() : std::exp(t);
        const double rho = w.radius_over_phi(r);
        const double q = r * w.log_derivative(r);
        ds[0] = s[0] + lambda_sq * rho * rho - s[0] * s[0] - (n - 1) * q * s[0];
        ds[1] = s[0];
    };

    std::vector<double> times;
    times.reserve(radii.size());
    for (double r : radii) times.push_back(std::log(r));

    State state{w0, 0.0};
    std::size_t index = 0;
    auto observer = [&](const State& s, double t) {
        const double r = radii[index];
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]))
            throw NumericalError("solve_profile: non-finite state at r = " + csv::format(r));
        State ds;
        rhs(s, ds, t);
        samples.push_back({r, s[1], s[0] / r, ds[0]});
        ++index;
    };

    auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_fehlberg78<State>());
    const double dt0 = times.size() > 1 ? std::min(1e-3, times[1] - times[0]) : 1e-3;
    try {
        odeint::integrate_times(stepper, rhs, state, times.begin(), times.end(), dt0, observer,
                                odeint::max_step_checker(1000000));
    } catch (const NumericalError&) {
        throw;
    } catch (const std::exception& e) {
        const double r = index < radii.size() ? radii[index] : radii.back();
        throw NumericalError(std::string("solve_profile: integration failed before r = ") + csv::format(r) + ": " +
                             e.what());
    }

    const auto anchor = std::find_if(samples.begin(), samples.end(), [](const auto& s) { return s.r == kAnchor; });
    const double shift = anchor->log_phi;
    for (auto& s : samples) s.log_phi -= shift;
    return {lambda_sq, n, gamma, std::move(samples)};
}

double profile_ratio(const RadialProfile& p, double r, double R) {
    if (!(R > 0.0)) throw DomainError("profile_ratio: R must be positive");
    const double lr = p.log_value(r);
    const double lR = p.log_value(R);
    return std::exp(lr - lR);
}

double closed_form_2d_log(const WarpingFunction& w, int m, double r) {
    if (m < 0) throw ConfigError("closed_form_2d: m must be nonnegative");
    if (!(r > 0.0)) throw DomainError("closed_form_2d: r must be positive");
    if (r > w.r_max()) throw DomainError("closed_form_2d: r exceeds r_max");
    if (m == 0 || r == kAnchor) return 0.0;
    const double t_max = std::log(w.r_max());
    // ds/phi(s) = (s/phi(s)) d(ln s); the integrand is bounded at the tip.
    auto integrand = [&](double t) { return w.radius_over_phi(t >= t_max ? w.r_max() : std::exp(t)); };
    return m * quadrature::integrate(integrand, 0.0, std::log(r));
}

double closed_form_2d(const WarpingFunction& w, int m, double r) {
    return std::exp(closed_form_2d_log(w, m, r));
}

std::vector<double> geometric_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("geometric_grid: need 0 < lo <= hi");
    if (per_decade < 1) throw ConfigError("geometric_grid: per_decade must be >= 1");
    const int count = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade)));
    std::vector<double> grid;
    grid.reserve(count + 1);
    const double step = std::log(hi / lo) / count;
    grid.push_back(lo);
    for (int i = 1; i < count; ++i) grid.push_back(lo * std::exp(step * i));
    if (hi > lo) grid.push_back(hi);
    return grid;
}

} // namespace conharm
