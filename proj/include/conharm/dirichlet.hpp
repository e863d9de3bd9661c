#pragma once

#include "conharm/link_spectrum.hpp"
#include "conharm/radial_solver.hpp"
#include "conharm/warping.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace conharm {

struct ModeTerm {
    ModeIndex mode;
    double coefficient;
};

namespace boundary {
struct Sampled {};
struct Constant {
    double value;
};
struct SingleMode {
    ModeIndex mode;
    double coefficient;
};
struct Combination {
    std::vector<ModeTerm> terms;
};
struct Random {
    std::uint64_t seed;
    int band_max;
    bool zero_mean;
};
} // namespace boundary

using BoundaryDescriptor =
    std::variant<boundary::Sampled, boundary::Constant, boundary::SingleMode, boundary::Combination, boundary::Random>;

/// Samples of boundary data h on the spectrum's quadrature grid, with an
/// optional description of how they were generated.
class BoundaryData {
public:
    static BoundaryData from_samples(const LinkSpectrum& s, std::vector<double> samples);
    static BoundaryData from_function(const LinkSpectrum& s, const std::function<double(LinkPoint)>& h);
    static BoundaryData constant(const LinkSpectrum& s, double value);
    static BoundaryData single_mode(const LinkSpectrum& s, ModeIndex mode, double coefficient = 1.0);
    static BoundaryData combination(const LinkSpectrum& s, std::vector<ModeTerm> terms);
    // Uniform(-1, 1) coefficients on every mode with m <= band_max.
    static BoundaryData random_band_limited(const LinkSpectrum& s, std::uint64_t seed, int band_max,
                                            bool zero_mean = false);

    // CSV `node_index,theta[,phi_angle],h` (custom links: `node_index,h`).
    static BoundaryData from_csv(const LinkSpectrum& s, const std::filesystem::path& path);
    void write_csv(std::ostream& out, const LinkSpectrum& s) const;

    std::span<const double> samples() const { return samples_; }
    const BoundaryDescriptor& descriptor() const { return descriptor_; }
    BoundaryData scaled(double factor) const;
    double quadrature_mean(const LinkSpectrum& s) const;

private:
    BoundaryData(std::vector<double> samples, BoundaryDescriptor descriptor)
        : samples_(std::move(samples)), descriptor_(std::move(descriptor)) {}

    std::vector<double> samples_;
    BoundaryDescriptor descriptor_;
};

/// Truncated harmonic extension
///   u(r, w) = sum_m (phi_m(r)/phi_m(R)) sum_k c_{m,k} f_{m,k}(w)
/// of boundary data on the sphere of radius R. Immutable.
class ConeHarmonic {
public:
    double outer_radius() const { return R_; }
    int dimension() const { return n_; }
    const LinkSpectrum& spectrum() const { return *spectrum_; }
    const WarpingFunction& warping() const { return warping_; }
    std::span<const RadialProfile> profiles() const { return profiles_; }
    const Coefficients& coefficients() const { return coefficients_; }

    // L^2(N) norm of h minus its projection onto the retained modes.
    double tail_bound() const { return tail_bound_; }
    // Largest |h - projection| over quadrature nodes.
    double node_residual_max() const { return node_residual_max_; }

    // phi_m(r)/phi_m(R) for every band.
    std::vector<double> band_ratios(double r) const;

    double evaluate(double r, LinkPoint omega) const;
    double evaluate_node(double r, std::size_t node) const;

    // Value at the tip: c_{0,0} f_{0,0}, the mean of h over N.
    double tip_value() const;

    /// max |u(r, .)| over a uniform angular grid with grid_density samples
    /// per dimension (quadrature nodes for custom links). A lower bound of
    /// the true sup that converges under refinement.
    double sup_norm(double r, int grid_density) const;

    // CSV `r,theta[,phi_angle],u` on the dense grid at each radius.
    void write_evaluation_csv(std::ostream& out, std::span<const double> radii, int grid_density) const;

private:
    friend ConeHarmonic extend(const BoundaryData&, double, std::shared_ptr<const LinkSpectrum>,
                               const WarpingFunction&, int);
    ConeHarmonic(std::shared_ptr<const LinkSpectrum> spectrum, WarpingFunction warping)
        : spectrum_(std::move(spectrum)), warping_(std::move(warping)) {}

    double combine(std::span<const double> ratios, std::span<const double> mode_values) const;
    void check_radius(double r) const;

    std::shared_ptr<const LinkSpectrum> spectrum_;
    WarpingFunction warping_;
    double R_ = 0.0;
    int n_ = 0;
    std::vector<RadialProfile> profiles_;
    Coefficients coefficients_;
    double tail_bound_ = 0.0;
    double node_residual_max_ = 0.0;
};

/// Projects h onto the link modes and solves one radial profile per band.
ConeHarmonic extend(const BoundaryData& h, double R, std::shared_ptr<const LinkSpectrum> spectrum,
                    const WarpingFunction& w, int n);

} // namespace conharm
