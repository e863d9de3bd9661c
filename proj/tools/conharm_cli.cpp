// conharm: harmonic functions on Riemannian cones.
//
// Exit codes: 0 success / all assertions passed, 1 assertion failure,
// 2 configuration error.

#include "conharm/csv.hpp"
#include "conharm/dirichlet.hpp"
#include "conharm/errors.hpp"
#include "conharm/experiments.hpp"
#include "conharm/liouville.hpp"
#include "conharm/radial_solver.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace conharm;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
    std::string warping = "euclidean";
    std::string warping_file;
    double r_max = kDefaultRMax;
    std::string link = "circle";
    int dim = 0;
    int m_max = 4;
    std::string spectrum_file;
    std::string eigen_file;
    std::string out;
};

int default_dim(const std::string& link) {
    if (link == "circle") return 2;
    if (link == "sphere2") return 3;
    throw ConfigError("--dim is required for link '" + link + "'");
}

ExperimentConfig to_config(const CommonOptions& o) {
    ExperimentConfig cfg;
    cfg.warping = o.warping;
    if (!o.warping_file.empty()) cfg.warping_file = o.warping_file;
    cfg.r_max = o.r_max;
    cfg.r_schedule.clear();
    cfg.link = o.link;
    cfg.n = o.dim > 0 ? o.dim : default_dim(o.link);
    cfg.m_max = o.m_max;
    if (!o.spectrum_file.empty()) cfg.spectrum_file = o.spectrum_file;
    if (!o.eigen_file.empty()) cfg.eigenfunction_file = o.eigen_file;
    return cfg;
}

// Writes to --out when given, stdout otherwise.
template <class Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path);
    write(out);
}

void add_geometry(CLI::App* app, CommonOptions& o) {
    app->add_option("--warping", o.warping, "euclidean | hyperbolic | bounded");
    app->add_option("--warping-file", o.warping_file, "tabulated warping CSV (r,phi,phi_p,phi_pp)");
    app->add_option("--r-max", o.r_max, "largest supported radius");
}

void add_link(CLI::App* app, CommonOptions& o) {
    app->add_option("--link", o.link, "circle | sphere2 | sphere | custom");
    app->add_option("--dim", o.dim, "cone dimension n");
    app->add_option("--m-max", o.m_max, "highest retained eigenvalue band");
    app->add_option("--spectrum-file", o.spectrum_file, "custom spectrum CSV (m,lambda_sq,multiplicity)");
    app->add_option("--eigen-file", o.eigen_file, "custom eigenfunction samples CSV (weight,modes...)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Harmonic functions on Riemannian cones: spectra, radial profiles, extensions, growth bounds"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalue table of the link Laplacian");
    add_link(spectrum_cmd, common);
    spectrum_cmd->add_option("--out", common.out, "output CSV");

    double lambda_sq = 1.0;
    double grid_lo = 1e-3;
    double grid_hi = 0.0;
    int per_decade = 32;
    bool integrate = false;
    auto* radial_cmd = app.add_subcommand("radial", "regular radial profile phi_m as CSV r,log_phi_m,v");
    add_geometry(radial_cmd, common);
    radial_cmd->add_option("--dim", common.dim, "cone dimension n")->required();
    radial_cmd->add_option("--lambda-sq", lambda_sq, "eigenvalue lambda_m^2")->required();
    radial_cmd->add_option("--r-min", grid_lo, "first grid radius");
    radial_cmd->add_option("--r-grid-max", grid_hi, "last grid radius (default r_max)");
    radial_cmd->add_option("--per-decade", per_decade, "grid points per decade");
    radial_cmd->add_flag("--integrate", integrate, "use the Riccati integrator even for phi = r");
    radial_cmd->add_option("--out", common.out, "output CSV");

    double outer_radius = 1.0;
    std::string boundary_file;
    std::vector<int> mode;
    std::optional<std::uint64_t> seed;
    std::vector<double> radii;
    int density = 0;
    auto* extend_cmd = app.add_subcommand("extend", "harmonic extension of boundary data, evaluated on a grid");
    add_geometry(extend_cmd, common);
    add_link(extend_cmd, common);
    extend_cmd->add_option("--R", outer_radius, "outer radius")->required();
    extend_cmd->add_option("--boundary-file", boundary_file, "CSV node_index,theta[,phi_angle],h");
    extend_cmd->add_option("--mode", mode, "single mode boundary data: m k")->expected(2);
    extend_cmd->add_option("--seed", seed, "random band-limited boundary data");
    extend_cmd->add_option("--radii", radii, "evaluation radii (default R/4 R/2 R)");
    extend_cmd->add_option("--grid-density", density, "angular samples per dimension");
    extend_cmd->add_option("--out", common.out, "output CSV");

    std::string regime = "general";
    double lambda1 = 0.0;
    std::vector<double> bound_radii;
    double probe_max = 0.0;
    auto* bound_cmd = app.add_subcommand("growth-bound", "growth bound log A(r) and divergence verdict");
    add_geometry(bound_cmd, common);
    add_link(bound_cmd, common);
    bound_cmd->add_option("--regime", regime, "general | nonneg");
    bound_cmd->add_option("--lambda1", lambda1, "first nontrivial eigenvalue lambda_1 (default: from --link)");
    bound_cmd->add_option("--r", bound_radii, "radii at which to report log A");
    bound_cmd->add_option("--probe-max", probe_max, "largest probe radius for the verdict (default r_max)");
    bound_cmd->add_option("--out", common.out, "output CSV");

    std::string experiment_name;
    std::string config_path;
    std::optional<std::uint64_t> exp_seed;
    std::optional<double> tol;
    std::optional<std::string> exp_warping, exp_link;
    std::optional<int> exp_dim, exp_m_max;
    auto* exp_cmd = app.add_subcommand("experiment", "run a named experiment and write its report");
    exp_cmd->add_option("name", experiment_name, "mode_decay | liouville_collapse | bound_comparison | growth_fit")
        ->required();
    exp_cmd->add_option("--config", config_path, "JSON config (keys mirror the report header)");
    exp_cmd->add_option("--out", common.out, "output CSV");
    exp_cmd->add_option("--warping", exp_warping, "override warping");
    exp_cmd->add_option("--link", exp_link, "override link");
    exp_cmd->add_option("--dim", exp_dim, "override cone dimension");
    exp_cmd->add_option("--m-max", exp_m_max, "override m_max");
    exp_cmd->add_option("--seed", exp_seed, "override seed");
    exp_cmd->add_option("--tol", tol, "override tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*spectrum_cmd) {
            const auto s = make_spectrum(to_config(common));
            emit(common.out, [&](std::ostream& out) {
                out << "m,lambda_sq,multiplicity\n";
                for (const auto& b : s->bands()) out << b.m << ',' << csv::format(b.lambda_sq) << ',' << b.multiplicity << '\n';
            });
            std::cerr << "lambda1 = " << csv::format(s->first_eigenvalue()) << '\n';
            return 0;
        }

        if (*radial_cmd) {
            auto cfg = to_config(common);
            const auto w = make_warping(cfg);
            const double hi = grid_hi > 0.0 ? grid_hi : w.r_max();
            SolveOptions options;
            options.force_integration = integrate;
            const auto profile = solve_profile(w, cfg.n, lambda_sq, geometric_grid(grid_lo, hi, per_decade), options);
            emit(common.out, [&](std::ostream& out) { profile.write_csv(out); });
            return 0;
        }

        if (*extend_cmd) {
            auto cfg = to_config(common);
            cfg.r_schedule = {outer_radius};
            const auto s = make_spectrum(cfg);
            const auto w = make_warping(cfg);
            std::optional<BoundaryData> h;
            if (!boundary_file.empty()) h = BoundaryData::from_csv(*s, boundary_file);
            else if (mode.size() == 2) h = BoundaryData::single_mode(*s, {mode[0], mode[1]});
            else if (seed) h = BoundaryData::random_band_limited(*s, *seed, s->m_max());
            else throw ConfigError("extend: give --boundary-file, --mode m k or --seed");
            const auto u = extend(*h, outer_radius, s, w, cfg.n);
            if (radii.empty()) radii = {outer_radius / 4, outer_radius / 2, outer_radius};
            const int d = density > 0 ? density : std::max(4 * s->m_max() + 1, 16);
            emit(common.out, [&](std::ostream& out) { u.write_evaluation_csv(out, radii, d); });
            std::cerr << "tip_value = " << csv::format(u.tip_value()) << "\ntail_bound = " << csv::format(u.tail_bound())
                      << '\n';
            return 0;
        }

        if (*bound_cmd) {
            auto cfg = to_config(common);
            const auto w = make_warping(cfg);
            const double l1 = lambda1 > 0.0 ? lambda1 : make_spectrum(cfg)->first_eigenvalue();
            const auto reg = regime == "general" ? BoundRegime::General
                             : regime == "nonneg" ? BoundRegime::NonnegCurvature
                                                  : throw ConfigError("--regime must be general or nonneg");
            const GrowthBound bound(reg, cfg.n, l1, w);
            if (bound.applicability_warning()) std::cerr << "warning: " << *bound.applicability_warning() << '\n';
            const auto verdict = divergence_verdict(bound, probe_max > 0.0 ? probe_max : w.r_max());
            if (bound_radii.empty()) bound_radii = verdict.radii;
            emit(common.out, [&](std::ostream& out) {
                out << "# verdict=" << to_string(verdict.verdict) << " log_A_max=" << csv::format(verdict.log_A_max)
                    << '\n';
                out << "r,log_A\n";
                for (double r : bound_radii) {
                    const double row[] = {r, bound.log_value(r)};
                    csv::write_row(out, row);
                }
            });
            std::cerr << "verdict: " << to_string(verdict.verdict) << '\n';
            return 0;
        }

        if (*exp_cmd) {
            ExperimentConfig cfg;
            if (!config_path.empty()) {
                std::ifstream in(config_path);
                if (!in) throw ConfigError("cannot open config " + config_path);
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw ConfigError(std::string("config: ") + e.what());
                }
                cfg = config_from_json(j);
            }
            cfg.experiment = experiment_name;
            if (exp_warping) cfg.warping = *exp_warping;
            if (exp_link) cfg.link = *exp_link;
            if (exp_dim) cfg.n = *exp_dim;
            if (exp_m_max) cfg.m_max = *exp_m_max;
            if (exp_seed) cfg.seed = *exp_seed;
            if (tol) cfg.tol = *tol;
            if (!common.out.empty()) cfg.output = common.out;
            const auto report = run_experiment(cfg);
            emit(cfg.output, [&](std::ostream& out) { report.write(out); });
            if (!report.passed) {
                for (const auto& f : report.failures) std::cerr << "FAIL " << f << '\n';
                return kExitFailure;
            }
            return 0;
        }
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
