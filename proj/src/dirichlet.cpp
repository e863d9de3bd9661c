#include "conharm/dirichlet.hpp"

#include "conharm/csv.hpp"
#include "conharm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

namespace conharm {

namespace {

constexpr int kProfilePointsPerDecade = 64;
constexpr double kGridMatchTol = 1e-9;

std::vector<double> samples_from_flat(const LinkSpectrum& s, const std::vector<double>& flat) {
    std::vector<double> samples(s.node_count(), 0.0);
    for (std::size_t i = 0; i < s.node_count(); ++i) {
        const auto row = s.node_mode_values(i);
        double sum = 0.0;
        for (int j = 0; j < s.mode_count(); ++j) sum += flat[j] * row[j];
        samples[i] = sum;
    }
    return samples;
}

int flat_index(const LinkSpectrum& s, ModeIndex mode) {
    if (mode.m < 0 || mode.m > s.m_max() || mode.k < 0 || mode.k >= s.band(mode.m).multiplicity)
        throw IndexError("boundary: mode (" + std::to_string(mode.m) + "," + std::to_string(mode.k) + ") out of range");
    return s.mode_offset(mode.m) + mode.k;
}

void require_eigenfunctions(const LinkSpectrum& s) {
    if (!s.supports_eigenfunctions())
        throw CapabilityError("boundary: link " + to_string(s.kind()) + " has no quadrature grid");
}

} // namespace

BoundaryData BoundaryData::from_samples(const LinkSpectrum& s, std::vector<double> samples) {
    require_eigenfunctions(s);
    if (samples.size() != s.node_count())
        throw ConfigError("boundary: " + std::to_string(samples.size()) + " samples for a grid of " +
                          std::to_string(s.node_count()));
    return {std::move(samples), boundary::Sampled{}};
}

BoundaryData BoundaryData::from_function(const LinkSpectrum& s, const std::function<double(LinkPoint)>& h) {
    require_eigenfunctions(s);
    if (!s.supports_point_evaluation()) throw CapabilityError("boundary: custom links have no node coordinates");
    std::vector<double> samples;
    samples.reserve(s.node_count());
    for (const auto& p : s.nodes()) samples.push_back(h(p));
    return {std::move(samples), boundary::Sampled{}};
}

BoundaryData BoundaryData::constant(const LinkSpectrum& s, double value) {
    require_eigenfunctions(s);
    return {std::vector<double>(s.node_count(), value), boundary::Constant{value}};
}

BoundaryData BoundaryData::single_mode(const LinkSpectrum& s, ModeIndex mode, double coefficient) {
    require_eigenfunctions(s);
    std::vector<double> flat(s.mode_count(), 0.0);
    flat[flat_index(s, mode)] = coefficient;
    return {samples_from_flat(s, flat), boundary::SingleMode{mode, coefficient}};
}

BoundaryData BoundaryData::combination(const LinkSpectrum& s, std::vector<ModeTerm> terms) {
    require_eigenfunctions(s);
    std::vector<double> flat(s.mode_count(), 0.0);
    for (const auto& t : terms) flat[flat_index(s, t.mode)] += t.coefficient;
    return {samples_from_flat(s, flat), boundary::Combination{std::move(terms)}};
}

BoundaryData BoundaryData::random_band_limited(const LinkSpectrum& s, std::uint64_t seed, int band_max,
                                               bool zero_mean) {
    require_eigenfunctions(s);
    if (band_max < 0 || band_max > s.m_max()) throw ConfigError("boundary: band_max outside the retained bands");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> flat(s.mode_count(), 0.0);
    const int end = s.mode_offset(band_max) + s.band(band_max).multiplicity;
    for (int j = 0; j < end; ++j) flat[j] = coef(rng);
    if (zero_mean) flat[0] = 0.0;
    return {samples_from_flat(s, flat), boundary::Random{seed, band_max, zero_mean}};
}

BoundaryData BoundaryData::from_csv(const LinkSpectrum& s, const std::filesystem::path& path) {
    require_eigenfunctions(s);
    const auto table = csv::read(path);
    const int ci = table.column("node_index");
    const int ch = table.column("h");
    const int ct = table.column("theta");
    const int cp = table.column("phi_angle");
    if (ci < 0 || ch < 0) throw ValidationError("boundary: csv needs node_index and h columns");
    if (table.rows.size() != s.node_count())
        throw ConfigError("boundary: csv has " + std::to_string(table.rows.size()) + " rows, grid has " +
                          std::to_string(s.node_count()));
    std::vector<double> samples(s.node_count(), 0.0);
    std::vector<bool> seen(s.node_count(), false);
    for (const auto& row : table.rows) {
        const long i = csv::to_integer(row[ci]);
        if (i < 0 || static_cast<std::size_t>(i) >= s.node_count() || seen[i])
            throw ConfigError("boundary: bad or repeated node_index " + row[ci]);
        seen[i] = true;
        if (s.supports_point_evaluation()) {
            const auto& p = s.nodes()[i];
            if (ct < 0 || std::abs(csv::to_double(row[ct]) - p.theta) > kGridMatchTol)
                throw ConfigError("boundary: theta of node " + row[ci] + " does not match the quadrature grid");
            if (s.kind() == LinkKind::RoundSphere2 &&
                (cp < 0 || std::abs(csv::to_double(row[cp]) - p.phi) > kGridMatchTol))
                throw ConfigError("boundary: phi_angle of node " + row[ci] + " does not match the quadrature grid");
        }
        samples[i] = csv::to_double(row[ch]);
    }
    return {std::move(samples), boundary::Sampled{}};
}

void BoundaryData::write_csv(std::ostream& out, const LinkSpectrum& s) const {
    const bool sphere = s.kind() == LinkKind::RoundSphere2;
    const bool coords = s.supports_point_evaluation();
    out << (coords ? (sphere ? "node_index,theta,phi_angle,h\n" : "node_index,theta,h\n") : "node_index,h\n");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        out << i;
        if (coords) {
            out << ',' << csv::format(s.nodes()[i].theta);
            if (sphere) out << ',' << csv::format(s.nodes()[i].phi);
        }
        out << ',' << csv::format(samples_[i]) << '\n';
    }
}

BoundaryData BoundaryData::scaled(double factor) const {
    auto samples = samples_;
    for (auto& x : samples) x *= factor;
    return {std::move(samples), boundary::Sampled{}};
}

double BoundaryData::quadrature_mean(const LinkSpectrum& s) const {
    const auto w = s.weights();
    double num = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) num += w[i] * samples_[i];
    return num / s.volume();
}

ConeHarmonic extend(const BoundaryData& h, double R, std::shared_ptr<const LinkSpectrum> spectrum,
                    const WarpingFunction& w, int n) {
    if (!spectrum) throw ConfigError("extend: missing spectrum");
    if (n != spectrum->dimension())
        throw ConfigError("extend: cone dimension " + std::to_string(n) + " does not match the link (n = " +
                          std::to_string(spectrum->dimension()) + ")");
    if (!(R > 0.0)) throw DomainError("extend: R must be positive");
    if (R > w.r_max()) throw DomainError("extend: R exceeds the warping's r_max");

    ConeHarmonic u(spectrum, w);
    u.R_ = R;
    u.n_ = n;
    const auto& s = *spectrum;
    u.coefficients_ = s.project(h.samples());

    double residual_sq = 0.0;
    double residual_max = 0.0;
    for (std::size_t i = 0; i < s.node_count(); ++i) {
        const double e = h.samples()[i] - s.synthesize_node(u.coefficients_, i);
        residual_sq += s.weights()[i] * e * e;
        residual_max = std::max(residual_max, std::abs(e));
    }
    u.tail_bound_ = std::sqrt(residual_sq);
    u.node_residual_max_ = residual_max;

    const auto grid = geometric_grid(1e-3 * std::min(1.0, R), R, kProfilePointsPerDecade);
    u.profiles_.reserve(s.bands().size());
    for (const auto& band : s.bands()) u.profiles_.push_back(solve_profile(w, n, band.lambda_sq, grid));
    return u;
}

void ConeHarmonic::check_radius(double r) const {
    if (!(r >= 0.0)) throw DomainError("ConeHarmonic: r must be nonnegative");
    if (r > R_) throw DomainError("ConeHarmonic: r = " + csv::format(r) + " exceeds R = " + csv::format(R_));
}

std::vector<double> ConeHarmonic::band_ratios(double r) const {
    check_radius(r);
    std::vector<double> ratios;
    ratios.reserve(profiles_.size());
    for (const auto& p : profiles_) ratios.push_back(r == R_ ? 1.0 : profile_ratio(p, r, R_));
    return ratios;
}

double ConeHarmonic::combine(std::span<const double> ratios, std::span<const double> mode_values) const {
    const auto& s = *spectrum_;
    double sum = 0.0;
    for (std::size_t m = 0; m < ratios.size(); ++m) {
        double band = 0.0;
        const int offset = s.mode_offset(static_cast<int>(m));
        for (std::size_t k = 0; k < coefficients_[m].size(); ++k) band += coefficients_[m][k] * mode_values[offset + k];
        sum += ratios[m] * band;
    }
    return sum;
}

double ConeHarmonic::evaluate(double r, LinkPoint omega) const {
    const auto ratios = band_ratios(r);
    const auto values = spectrum_->mode_values(omega);
    return combine(ratios, values);
}

double ConeHarmonic::evaluate_node(double r, std::size_t node) const {
    const auto ratios = band_ratios(r);
    return combine(ratios, spectrum_->node_mode_values(node));
}

double ConeHarmonic::tip_value() const {
    return coefficients_[0][0] * spectrum_->node_mode_values(0)[0];
}

double ConeHarmonic::sup_norm(double r, int grid_density) const {
    const auto& s = *spectrum_;
    if (r <= 0.0) return std::abs(tip_value());
    const auto ratios = band_ratios(r);
    double sup = 0.0;
    if (!s.supports_point_evaluation()) {
        for (std::size_t i = 0; i < s.node_count(); ++i)
            sup = std::max(sup, std::abs(combine(ratios, s.node_mode_values(i))));
        return sup;
    }
    if (grid_density < 4 * s.m_max() + 1)
        throw ConfigError("sup_norm: grid_density must be >= 4*m_max+1 = " + std::to_string(4 * s.m_max() + 1));
    for (const auto& p : s.dense_grid(grid_density)) sup = std::max(sup, std::abs(combine(ratios, s.mode_values(p))));
    return sup;
}

void ConeHarmonic::write_evaluation_csv(std::ostream& out, std::span<const double> radii, int grid_density) const {
    const auto& s = *spectrum_;
    const bool sphere = s.kind() == LinkKind::RoundSphere2;
    if (!s.supports_point_evaluation()) {
        out << "r,node_index,u\n";
        for (double r : radii) {
            const auto ratios = band_ratios(r);
            for (std::size_t i = 0; i < s.node_count(); ++i)
                out << csv::format(r) << ',' << i << ',' << csv::format(combine(ratios, s.node_mode_values(i))) << '\n';
        }
        return;
    }
    out << (sphere ? "r,theta,phi_angle,u\n" : "r,theta,u\n");
    const auto grid = s.dense_grid(grid_density);
    for (double r : radii) {
        const auto ratios = band_ratios(r);
        for (const auto& p : grid) {
            const double u = combine(ratios, s.mode_values(p));
            if (sphere) {
                const double row[] = {r, p.theta, p.phi, u};
                csv::write_row(out, row);
            } else {
                const double row[] = {r, p.theta, u};
                csv::write_row(out, row);
            }
        }
    }
}

} // namespace conharm
