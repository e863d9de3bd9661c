#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace conharm {

enum class LinkKind { Circle, RoundSphere2, RoundSphereGeneral, Custom };

std::string to_string(LinkKind kind);
LinkKind link_kind_from_name(std::string_view name);

// One eigenvalue band lambda_m^2 of the link Laplacian.
struct Band {
    int m;
    double lambda_sq;
    int multiplicity;
};

struct ModeIndex {
    int m;
    int k;
};

// Point of the link. Circle: theta is the angle. Sphere: theta is the
// colatitude and phi the longitude.
struct LinkPoint {
    double theta = 0.0;
    double phi = 0.0;
};

// Sampled eigenfunctions of a custom link: one row per quadrature node,
// columns are the modes in band order.
struct EigenSamples {
    std::vector<double> weights;
    std::vector<std::vector<double>> values;
};

// Coefficients c_{m,k}, indexed [m][k].
using Coefficients = std::vector<std::vector<double>>;

/// Eigenvalues and orthonormal eigenfunctions of the Laplacian on the link N.
///
/// Circle uses the real basis {1, cos m theta, sin m theta}; the 2-sphere uses
/// real spherical harmonics with, inside band m, k = 0 the zonal harmonic and
/// k = 2j-1, 2j the cos(j phi), sin(j phi) pair. Every mode has unit L^2 norm
/// on N.
///
/// The quadrature grid is fixed by m_max and is exact for all Gram integrands
/// up to that band: 4 m_max + 1 uniform angles on the circle; on the sphere a
/// (2 m_max + 1)-point Gauss-Legendre rule in cos(theta) times 4 m_max + 1
/// uniform longitudes.
class LinkSpectrum {
public:
    // Circle requires n = 2, RoundSphere2 n = 3, RoundSphereGeneral n >= 3.
    static LinkSpectrum build(LinkKind kind, int n, int m_max);

    // Validates lambda_0 = 0 with multiplicity 1, strictly increasing
    // eigenvalues and (when given) sample shapes.
    static LinkSpectrum custom(int n, std::vector<Band> bands, std::optional<EigenSamples> samples = std::nullopt);

    // Spectrum table `m,lambda_sq,multiplicity` (multiplicity optional,
    // defaults to 1) and an optional sample matrix `weight,<mode columns...>`.
    static LinkSpectrum custom_from_csv(int n, const std::filesystem::path& table,
                                        const std::optional<std::filesystem::path>& samples = std::nullopt);

    LinkKind kind() const { return kind_; }
    int dimension() const { return n_; }
    int m_max() const { return static_cast<int>(bands_.size()) - 1; }
    std::span<const Band> bands() const { return bands_; }
    const Band& band(int m) const;
    int mode_count() const { return mode_count_; }
    // Offset of band m in the flattened mode ordering.
    int mode_offset(int m) const { return offsets_.at(m); }

    double first_eigenvalue() const;

    bool supports_eigenfunctions() const { return !weights_.empty(); }
    bool supports_point_evaluation() const { return kind_ == LinkKind::Circle || kind_ == LinkKind::RoundSphere2; }

    std::size_t node_count() const { return weights_.size(); }
    std::span<const LinkPoint> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    double volume() const;

    double eval_mode(ModeIndex mode, LinkPoint omega) const;
    // All modes at omega, flattened in band order.
    std::vector<double> mode_values(LinkPoint omega) const;
    // All modes at quadrature node i (precomputed).
    std::span<const double> node_mode_values(std::size_t node) const;

    Coefficients project(std::span<const double> samples) const;
    double synthesize(const Coefficients& c, LinkPoint omega) const;
    double synthesize_node(const Coefficients& c, std::size_t node) const;
    Coefficients zero_coefficients() const;

    // Uniform dense grid used for sup-norm searches (poles included on the
    // sphere). Not a quadrature rule.
    std::vector<LinkPoint> dense_grid(int density) const;

private:
    LinkSpectrum() = default;
    void finish_bands();
    void check_mode(ModeIndex mode) const;

    LinkKind kind_ = LinkKind::Circle;
    int n_ = 2;
    std::vector<Band> bands_;
    std::vector<int> offsets_;
    int mode_count_ = 0;
    std::vector<LinkPoint> nodes_;
    std::vector<double> weights_;
    std::vector<double> node_values_; // node_count x mode_count, row-major
};

// Multiplicity of lambda_m^2 = m(m+n-2) on the round sphere S^{n-1}.
long long sphere_multiplicity(int n, int m);

} // namespace conharm
