#pragma once

#include "conharm/dirichlet.hpp"
#include "conharm/link_spectrum.hpp"
#include "conharm/warping.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace conharm {

struct BoundarySpec {
    std::string type = "single_mode"; // single_mode | constant | combination | random
    int m = 1;
    int k = 0;
    double value = 1.0;
    std::vector<ModeTerm> terms;
    int band_max = 1;
};

/// Resolved configuration of one experiment run. JSON keys mirror the field
/// names.
struct ExperimentConfig {
    std::string experiment;

    std::string warping = "euclidean";
    std::optional<std::string> warping_file;
    double r_max = kDefaultRMax;

    std::string link = "circle";
    int n = 2;
    int m_max = 4;
    std::optional<std::string> spectrum_file;
    std::optional<std::string> eigenfunction_file;

    std::vector<double> r_schedule{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    double r0 = 1.0;
    BoundarySpec boundary;
    std::string amplitude = "log_r"; // log_r | phi1 | zero | constant
    std::optional<std::uint64_t> seed;

    std::vector<int> dims{3, 4, 5, 6, 7, 8, 9, 10};
    std::optional<double> lambda1;

    std::vector<double> lambda_sq;
    double fit_r_min = 1.0;
    double fit_r_max = 1000.0;

    double tol = 1e-6;
    double fit_tol = 1e-4;
    double collapse_tol = 1e-3;
    int grid_density = 0; // 0: max(4 m_max + 1, 64)
    std::string output;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

// Throws ConfigError on violated invariants (R0 >= min schedule,
// non-increasing schedule, random data without seed, unknown names).
void validate(const ExperimentConfig& cfg);

struct ExperimentReport {
    std::string name;
    nlohmann::json config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    bool passed = true;
    std::vector<std::string> failures;

    // `#`-prefixed JSON config line followed by the CSV body.
    void write(std::ostream& out) const;
    std::string body() const;
};

ExperimentReport exp_mode_decay(const ExperimentConfig& cfg);
ExperimentReport exp_liouville_collapse(const ExperimentConfig& cfg);
ExperimentReport exp_bound_comparison(const ExperimentConfig& cfg);
ExperimentReport exp_growth_fit(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment (dashes and underscores are interchangeable).
ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::vector<std::string> experiment_names();

// Helpers shared with the CLI.
std::shared_ptr<const LinkSpectrum> make_spectrum(const ExperimentConfig& cfg);
WarpingFunction make_warping(const ExperimentConfig& cfg);
BoundaryData make_boundary(const ExperimentConfig& cfg, const LinkSpectrum& s);

} // namespace conharm
