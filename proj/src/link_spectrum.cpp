#include "conharm/link_spectrum.hpp"

#include "conharm/csv.hpp"
#include "conharm/errors.hpp"
#include "conharm/quadrature.hpp"

#include <boost/math/special_functions/spherical_harmonic.hpp>

#include <cmath>
#include <numbers>
#include <numeric>

namespace conharm {

namespace {

using std::numbers::pi;

long long binomial(long long n, long long k) {
    if (k < 0 || n < k) return 0;
    long long result = 1;
    for (long long i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
}

double circle_mode(int m, int k, double theta) {
    if (m == 0) return 1.0 / std::sqrt(2.0 * pi);
    const double c = 1.0 / std::sqrt(pi);
    return k == 0 ? c * std::cos(m * theta) : c * std::sin(m * theta);
}

double sphere_mode(int l, int k, double theta, double phi) {
    if (k == 0) return boost::math::spherical_harmonic_r<double>(l, 0, theta, phi);
    const int order = (k + 1) / 2;
    if (k % 2 == 1) return std::numbers::sqrt2 * boost::math::spherical_harmonic_r<double>(l, order, theta, phi);
    return std::numbers::sqrt2 * boost::math::spherical_harmonic_i<double>(l, order, theta, phi);
}

} // namespace

std::string to_string(LinkKind kind) {
    switch (kind) {
    case LinkKind::Circle: return "circle";
    case LinkKind::RoundSphere2: return "sphere2";
    case LinkKind::RoundSphereGeneral: return "sphere";
    case LinkKind::Custom: return "custom";
    }
    return "unknown";
}

LinkKind link_kind_from_name(std::string_view name) {
    if (name == "circle") return LinkKind::Circle;
    if (name == "sphere2") return LinkKind::RoundSphere2;
    if (name == "sphere") return LinkKind::RoundSphereGeneral;
    if (name == "custom") return LinkKind::Custom;
    throw ConfigError("link: unknown kind '" + std::string(name) + "' (circle|sphere2|sphere|custom)");
}

long long sphere_multiplicity(int n, int m) {
    if (m == 0) return 1;
    return binomial(m + n - 1, n - 1) - binomial(m + n - 3, n - 1);
}

void LinkSpectrum::finish_bands() {
    offsets_.clear();
    mode_count_ = 0;
    for (const auto& b : bands_) {
        offsets_.push_back(mode_count_);
        mode_count_ += b.multiplicity;
    }
}

LinkSpectrum LinkSpectrum::build(LinkKind kind, int n, int m_max) {
    if (m_max < 1) throw ConfigError("link: m_max must be >= 1");
    LinkSpectrum s;
    s.kind_ = kind;
    s.n_ = n;
    switch (kind) {
    case LinkKind::Circle:
        if (n != 2) throw ConfigError("link: circle requires n = 2");
        for (int m = 0; m <= m_max; ++m) s.bands_.push_back({m, static_cast<double>(m * m), m == 0 ? 1 : 2});
        break;
    case LinkKind::RoundSphere2:
        if (n != 3) throw ConfigError("link: sphere2 requires n = 3");
        for (int m = 0; m <= m_max; ++m) s.bands_.push_back({m, static_cast<double>(m * (m + 1)), 2 * m + 1});
        break;
    case LinkKind::RoundSphereGeneral:
        if (n < 3) throw ConfigError("link: round sphere requires n >= 3");
        for (int m = 0; m <= m_max; ++m) {
            const long long lambda_sq = static_cast<long long>(m) * (m + n - 2);
            s.bands_.push_back({m, static_cast<double>(lambda_sq), static_cast<int>(sphere_multiplicity(n, m))});
        }
        break;
    case LinkKind::Custom: throw ConfigError("link: custom spectra are built with LinkSpectrum::custom");
    }
    s.finish_bands();

    if (kind == LinkKind::Circle) {
        const auto rule = quadrature::periodic_trapezoid(4 * m_max + 1);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            s.nodes_.push_back({rule.nodes[i], 0.0});
            s.weights_.push_back(rule.weights[i]);
        }
    } else if (kind == LinkKind::RoundSphere2) {
        const auto gl = quadrature::gauss_legendre(2 * m_max + 1);
        const auto lon = quadrature::periodic_trapezoid(4 * m_max + 1);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i)
            for (std::size_t j = 0; j < lon.nodes.size(); ++j) {
                s.nodes_.push_back({std::acos(gl.nodes[i]), lon.nodes[j]});
                s.weights_.push_back(gl.weights[i] * lon.weights[j]);
            }
    }

    if (s.supports_point_evaluation()) {
        s.node_values_.reserve(s.nodes_.size() * s.mode_count_);
        for (const auto& p : s.nodes_) {
            const auto values = s.mode_values(p);
            s.node_values_.insert(s.node_values_.end(), values.begin(), values.end());
        }
    }
    return s;
}

LinkSpectrum LinkSpectrum::custom(int n, std::vector<Band> bands, std::optional<EigenSamples> samples) {
    if (n < 2) throw ConfigError("link: n must be >= 2");
    if (bands.size() < 2) throw ConfigError("link: custom spectrum needs lambda_0 and at least one nontrivial band");
    for (std::size_t i = 0; i < bands.size(); ++i) {
        if (bands[i].m != static_cast<int>(i)) throw ValidationError("link: custom band indices must be 0, 1, 2, ...");
        if (bands[i].multiplicity < 1) throw ValidationError("link: multiplicities must be >= 1");
        if (!std::isfinite(bands[i].lambda_sq)) throw ValidationError("link: non-finite eigenvalue");
    }
    if (bands[0].lambda_sq != 0.0 || bands[0].multiplicity != 1)
        throw ValidationError("link: custom spectrum must start with lambda_0 = 0 of multiplicity 1");
    if (!(bands[1].lambda_sq > 0.0)) throw ValidationError("link: first nontrivial eigenvalue must be positive");
    for (std::size_t i = 1; i < bands.size(); ++i)
        if (!(bands[i].lambda_sq > bands[i - 1].lambda_sq))
            throw ValidationError("link: custom eigenvalues must be strictly increasing");

    LinkSpectrum s;
    s.kind_ = LinkKind::Custom;
    s.n_ = n;
    s.bands_ = std::move(bands);
    s.finish_bands();
    if (samples) {
        if (samples->weights.empty() || samples->values.size() != samples->weights.size())
            throw ValidationError("link: eigenfunction samples need one row per quadrature weight");
        for (const auto& row : samples->values)
            if (static_cast<int>(row.size()) != s.mode_count_)
                throw ValidationError("link: eigenfunction samples need one column per mode (" +
                                      std::to_string(s.mode_count_) + ")");
        s.weights_ = std::move(samples->weights);
        for (auto& row : samples->values) s.node_values_.insert(s.node_values_.end(), row.begin(), row.end());
    }
    return s;
}

LinkSpectrum LinkSpectrum::custom_from_csv(int n, const std::filesystem::path& table,
                                           const std::optional<std::filesystem::path>& samples) {
    const auto t = csv::read(table);
    const int cm = t.column("m");
    const int cl = t.column("lambda_sq");
    const int cmult = t.column("multiplicity");
    if (cm < 0 || cl < 0) throw ValidationError("link: spectrum csv header must be m,lambda_sq[,multiplicity]");
    std::vector<Band> bands;
    for (const auto& row : t.rows)
        bands.push_back({static_cast<int>(csv::to_integer(row[cm])), csv::to_double(row[cl]),
                         cmult >= 0 ? static_cast<int>(csv::to_integer(row[cmult])) : 1});
    std::optional<EigenSamples> eigen;
    if (samples) {
        const auto st = csv::read(*samples);
        const int cw = st.column("weight");
        if (cw != 0) throw ValidationError("link: eigenfunction sample csv must start with a weight column");
        EigenSamples es;
        for (const auto& row : st.rows) {
            es.weights.push_back(csv::to_double(row[0]));
            std::vector<double> values;
            for (std::size_t j = 1; j < row.size(); ++j) values.push_back(csv::to_double(row[j]));
            es.values.push_back(std::move(values));
        }
        eigen = std::move(es);
    }
    return custom(n, std::move(bands), std::move(eigen));
}

const Band& LinkSpectrum::band(int m) const {
    if (m < 0 || m > m_max()) throw IndexError("link: band index " + std::to_string(m) + " out of range");
    return bands_[m];
}

double LinkSpectrum::first_eigenvalue() const {
    const double lambda_sq = band(1).lambda_sq;
    if (!(lambda_sq > 0.0)) throw ValidationError("link: first nontrivial eigenvalue must be positive");
    return std::sqrt(lambda_sq);
}

double LinkSpectrum::volume() const {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

void LinkSpectrum::check_mode(ModeIndex mode) const {
    if (mode.m < 0 || mode.m > m_max() || mode.k < 0 || mode.k >= bands_[mode.m].multiplicity)
        throw IndexError("link: mode (" + std::to_string(mode.m) + "," + std::to_string(mode.k) + ") out of range");
}

double LinkSpectrum::eval_mode(ModeIndex mode, LinkPoint omega) const {
    check_mode(mode);
    switch (kind_) {
    case LinkKind::Circle: return circle_mode(mode.m, mode.k, omega.theta);
    case LinkKind::RoundSphere2: return sphere_mode(mode.m, mode.k, omega.theta, omega.phi);
    default: throw CapabilityError("link: eigenfunction evaluation not supported for " + to_string(kind_));
    }
}

std::vector<double> LinkSpectrum::mode_values(LinkPoint omega) const {
    if (!supports_point_evaluation())
        throw CapabilityError("link: eigenfunction evaluation not supported for " + to_string(kind_));
    std::vector<double> values;
    values.reserve(mode_count_);
    for (const auto& b : bands_)
        for (int k = 0; k < b.multiplicity; ++k)
            values.push_back(kind_ == LinkKind::Circle ? circle_mode(b.m, k, omega.theta)
                                                       : sphere_mode(b.m, k, omega.theta, omega.phi));
    return values;
}

std::span<const double> LinkSpectrum::node_mode_values(std::size_t node) const {
    if (!supports_eigenfunctions()) throw CapabilityError("link: no eigenfunctions for " + to_string(kind_));
    if (node >= node_count()) throw IndexError("link: node index out of range");
    return std::span<const double>(node_values_).subspan(node * mode_count_, mode_count_);
}

Coefficients LinkSpectrum::zero_coefficients() const {
    Coefficients c;
    for (const auto& b : bands_) c.emplace_back(b.multiplicity, 0.0);
    return c;
}

Coefficients LinkSpectrum::project(std::span<const double> samples) const {
    if (!supports_eigenfunctions())
        throw CapabilityError("link: projection requires eigenfunctions; not available for " + to_string(kind_));
    if (samples.size() != node_count())
        throw ConfigError("link: boundary data has " + std::to_string(samples.size()) + " samples, grid has " +
                          std::to_string(node_count()));
    std::vector<double> flat(mode_count_, 0.0);
    for (std::size_t i = 0; i < node_count(); ++i) {
        const double wh = weights_[i] * samples[i];
        const auto row = node_mode_values(i);
        for (int j = 0; j < mode_count_; ++j) flat[j] += wh * row[j];
    }
    auto c = zero_coefficients();
    for (std::size_t m = 0; m < bands_.size(); ++m)
        for (int k = 0; k < bands_[m].multiplicity; ++k) c[m][k] = flat[offsets_[m] + k];
    return c;
}

double LinkSpectrum::synthesize(const Coefficients& c, LinkPoint omega) const {
    const auto values = mode_values(omega);
    double sum = 0.0;
    for (std::size_t m = 0; m < bands_.size(); ++m)
        for (int k = 0; k < bands_[m].multiplicity; ++k) sum += c.at(m).at(k) * values[offsets_[m] + k];
    return sum;
}

double LinkSpectrum::synthesize_node(const Coefficients& c, std::size_t node) const {
    const auto values = node_mode_values(node);
    double sum = 0.0;
    for (std::size_t m = 0; m < bands_.size(); ++m)
        for (int k = 0; k < bands_[m].multiplicity; ++k) sum += c.at(m).at(k) * values[offsets_[m] + k];
    return sum;
}

std::vector<LinkPoint> LinkSpectrum::dense_grid(int density) const {
    if (density < 2) throw ConfigError("link: dense grid density must be >= 2");
    std::vector<LinkPoint> grid;
    if (kind_ == LinkKind::Circle) {
        for (int i = 0; i < density; ++i) grid.push_back({2.0 * pi * i / density, 0.0});
    } else if (kind_ == LinkKind::RoundSphere2) {
        for (int i = 0; i < density; ++i) {
            const double theta = pi * i / (density - 1);
            for (int j = 0; j < density; ++j) grid.push_back({theta, 2.0 * pi * j / density});
        }
    } else {
        throw CapabilityError("link: dense grids need point evaluation; not available for " + to_string(kind_));
    }
    return grid;
}

} // namespace conharm
