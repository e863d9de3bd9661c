#include "conharm/experiments.hpp"

#include "conharm/csv.hpp"
#include "conharm/errors.hpp"
#include "conharm/liouville.hpp"
#include "conharm/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace conharm {

using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys{
    "experiment", "warping",   "warping_file", "r_max",    "link",      "n",           "m_max",
    "spectrum_file", "eigenfunction_file", "r_schedule", "r0", "boundary", "amplitude", "seed",
    "dims",       "lambda1",   "lambda_sq",    "fit_r_min", "fit_r_max", "tol",         "fit_tol",
    "collapse_tol", "grid_density", "output"};

std::string canonical_name(std::string name) {
    std::replace(name.begin(), name.end(), '-', '_');
    return name;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return get_or<T>(j, key, T{});
}

int grid_density(const ExperimentConfig& cfg) {
    return cfg.grid_density > 0 ? cfg.grid_density : std::max(4 * cfg.m_max + 1, 64);
}

double dense_sup(const LinkSpectrum& s, const BoundaryData& h, int density) {
    // sup of the synthesized boundary data on the same grid sup_norm uses.
    const auto c = s.project(h.samples());
    double sup = 0.0;
    if (!s.supports_point_evaluation()) {
        for (std::size_t i = 0; i < s.node_count(); ++i) sup = std::max(sup, std::abs(s.synthesize_node(c, i)));
        return sup;
    }
    for (const auto& p : s.dense_grid(density)) sup = std::max(sup, std::abs(s.synthesize(c, p)));
    return sup;
}

BoundaryData unit_sup_boundary(const ExperimentConfig& cfg, const LinkSpectrum& s) {
    const auto raw = make_boundary(cfg, s);
    const double sup = dense_sup(s, raw, grid_density(cfg));
    if (!(sup > 0.0)) throw ConfigError("experiment: boundary data vanishes identically");
    return raw.scaled(1.0 / sup);
}

ExperimentReport new_report(const ExperimentConfig& cfg, std::string name, std::vector<std::string> columns) {
    ExperimentReport report;
    report.name = std::move(name);
    report.config = to_json(cfg);
    report.columns = std::move(columns);
    return report;
}

void fail(ExperimentReport& report, std::string message) {
    report.passed = false;
    report.failures.push_back(std::move(message));
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [key, _] : j.items())
        if (!kConfigKeys.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    ExperimentConfig cfg;
    cfg.experiment = canonical_name(get_or<std::string>(j, "experiment", ""));
    cfg.warping = get_or(j, "warping", cfg.warping);
    cfg.warping_file = get_optional<std::string>(j, "warping_file");
    cfg.r_max = get_or(j, "r_max", cfg.r_max);
    cfg.link = get_or(j, "link", cfg.link);
    cfg.n = get_or(j, "n", cfg.n);
    cfg.m_max = get_or(j, "m_max", cfg.m_max);
    cfg.spectrum_file = get_optional<std::string>(j, "spectrum_file");
    cfg.eigenfunction_file = get_optional<std::string>(j, "eigenfunction_file");
    cfg.r_schedule = get_or(j, "r_schedule", cfg.r_schedule);
    cfg.r0 = get_or(j, "r0", cfg.r0);
    if (j.contains("boundary")) {
        const auto& b = j.at("boundary");
        if (!b.is_object()) throw ConfigError("config: boundary must be an object");
        cfg.boundary.type = get_or(b, "type", cfg.boundary.type);
        cfg.boundary.m = get_or(b, "m", cfg.boundary.m);
        cfg.boundary.k = get_or(b, "k", cfg.boundary.k);
        cfg.boundary.value = get_or(b, "value", cfg.boundary.value);
        cfg.boundary.band_max = get_or(b, "band_max", cfg.boundary.band_max);
        if (b.contains("terms"))
            for (const auto& t : b.at("terms"))
                cfg.boundary.terms.push_back({{get_or(t, "m", 0), get_or(t, "k", 0)}, get_or(t, "coef", 0.0)});
    }
    cfg.amplitude = get_or(j, "amplitude", cfg.amplitude);
    cfg.seed = get_optional<std::uint64_t>(j, "seed");
    cfg.dims = get_or(j, "dims", cfg.dims);
    cfg.lambda1 = get_optional<double>(j, "lambda1");
    cfg.lambda_sq = get_or(j, "lambda_sq", cfg.lambda_sq);
    cfg.fit_r_min = get_or(j, "fit_r_min", cfg.fit_r_min);
    cfg.fit_r_max = get_or(j, "fit_r_max", cfg.fit_r_max);
    cfg.tol = get_or(j, "tol", cfg.tol);
    cfg.fit_tol = get_or(j, "fit_tol", cfg.fit_tol);
    cfg.collapse_tol = get_or(j, "collapse_tol", cfg.collapse_tol);
    cfg.grid_density = get_or(j, "grid_density", cfg.grid_density);
    cfg.output = get_or(j, "output", cfg.output);
    return cfg;
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["warping"] = cfg.warping;
    j["warping_file"] = cfg.warping_file ? json(*cfg.warping_file) : json(nullptr);
    j["r_max"] = cfg.r_max;
    j["link"] = cfg.link;
    j["n"] = cfg.n;
    j["m_max"] = cfg.m_max;
    j["spectrum_file"] = cfg.spectrum_file ? json(*cfg.spectrum_file) : json(nullptr);
    j["eigenfunction_file"] = cfg.eigenfunction_file ? json(*cfg.eigenfunction_file) : json(nullptr);
    j["r_schedule"] = cfg.r_schedule;
    j["r0"] = cfg.r0;
    json terms = json::array();
    for (const auto& t : cfg.boundary.terms) terms.push_back({{"m", t.mode.m}, {"k", t.mode.k}, {"coef", t.coefficient}});
    j["boundary"] = {{"type", cfg.boundary.type}, {"m", cfg.boundary.m},         {"k", cfg.boundary.k},
                     {"value", cfg.boundary.value}, {"band_max", cfg.boundary.band_max}, {"terms", terms}};
    j["amplitude"] = cfg.amplitude;
    j["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
    j["dims"] = cfg.dims;
    j["lambda1"] = cfg.lambda1 ? json(*cfg.lambda1) : json(nullptr);
    j["lambda_sq"] = cfg.lambda_sq;
    j["fit_r_min"] = cfg.fit_r_min;
    j["fit_r_max"] = cfg.fit_r_max;
    j["tol"] = cfg.tol;
    j["fit_tol"] = cfg.fit_tol;
    j["collapse_tol"] = cfg.collapse_tol;
    j["grid_density"] = cfg.grid_density;
    j["output"] = cfg.output;
    return j;
}

void validate(const ExperimentConfig& cfg) {
    const auto names = experiment_names();
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
        throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");
    if (cfg.r_schedule.empty()) throw ConfigError("config: r_schedule is empty");
    for (std::size_t i = 1; i < cfg.r_schedule.size(); ++i)
        if (!(cfg.r_schedule[i] > cfg.r_schedule[i - 1]))
            throw ConfigError("config: r_schedule must be strictly increasing");
    if (!(cfg.r0 > 0.0) || !(cfg.r0 < cfg.r_schedule.front()))
        throw ConfigError("config: r0 must satisfy 0 < r0 < min(r_schedule)");
    if (cfg.boundary.type == "random" && !cfg.seed) throw ConfigError("config: random boundary data requires a seed");
    static const std::set<std::string> boundary_types{"single_mode", "constant", "combination", "random"};
    if (!boundary_types.contains(cfg.boundary.type))
        throw ConfigError("config: unknown boundary type '" + cfg.boundary.type + "'");
    static const std::set<std::string> amplitudes{"log_r", "phi1", "zero", "constant"};
    if (!amplitudes.contains(cfg.amplitude)) throw ConfigError("config: unknown amplitude '" + cfg.amplitude + "'");
    if (!(cfg.tol > 0.0) || !(cfg.fit_tol > 0.0) || !(cfg.collapse_tol > 0.0))
        throw ConfigError("config: tolerances must be positive");
    if (cfg.m_max < 1) throw ConfigError("config: m_max must be >= 1");
}

std::vector<std::string> experiment_names() {
    return {"mode_decay", "liouville_collapse", "bound_comparison", "growth_fit"};
}

std::shared_ptr<const LinkSpectrum> make_spectrum(const ExperimentConfig& cfg) {
    const auto kind = link_kind_from_name(cfg.link);
    if (kind == LinkKind::Custom) {
        if (!cfg.spectrum_file) throw ConfigError("config: custom link requires spectrum_file");
        std::optional<std::filesystem::path> samples;
        if (cfg.eigenfunction_file) samples = *cfg.eigenfunction_file;
        return std::make_shared<const LinkSpectrum>(LinkSpectrum::custom_from_csv(cfg.n, *cfg.spectrum_file, samples));
    }
    return std::make_shared<const LinkSpectrum>(LinkSpectrum::build(kind, cfg.n, cfg.m_max));
}

WarpingFunction make_warping(const ExperimentConfig& cfg) {
    if (cfg.warping_file) return WarpingFunction::from_csv(*cfg.warping_file);
    if (cfg.warping == "tabulated") throw ConfigError("config: tabulated warping requires warping_file");
    double r_max = cfg.r_max;
    if (!cfg.r_schedule.empty()) r_max = std::max(r_max, cfg.r_schedule.back());
    return WarpingFunction::from_name(cfg.warping, r_max);
}

BoundaryData make_boundary(const ExperimentConfig& cfg, const LinkSpectrum& s) {
    const auto& b = cfg.boundary;
    if (b.type == "constant") return BoundaryData::constant(s, b.value);
    if (b.type == "single_mode") return BoundaryData::single_mode(s, {b.m, b.k});
    if (b.type == "combination") return BoundaryData::combination(s, b.terms);
    if (b.type == "random") {
        if (!cfg.seed) throw ConfigError("config: random boundary data requires a seed");
        return BoundaryData::random_band_limited(s, *cfg.seed, std::min(b.band_max, s.m_max()));
    }
    throw ConfigError("config: unknown boundary type '" + b.type + "'");
}

ExperimentReport exp_mode_decay(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto spectrum = make_spectrum(cfg);
    const auto warping = make_warping(cfg);
    const auto h = unit_sup_boundary(cfg, *spectrum);
    const int density = grid_density(cfg);
    const bool single = cfg.boundary.type == "single_mode";
    const bool constant = cfg.boundary.type == "constant";

    auto report = new_report(cfg, "mode_decay", {"R", "sup_interior", "predicted_ratio", "rel_err"});
    for (double R : cfg.r_schedule) {
        const auto u = extend(h, R, spectrum, warping, cfg.n);
        const double sup = u.sup_norm(cfg.r0, density);
        double predicted = std::numeric_limits<double>::quiet_NaN();
        if (single) predicted = profile_ratio(u.profiles()[cfg.boundary.m], cfg.r0, R);
        if (constant) predicted = 1.0;
        const double rel_err = std::abs(sup - predicted) / std::abs(predicted);
        report.rows.push_back({R, sup, predicted, rel_err});
        if ((single || constant) && !(rel_err <= cfg.tol))
            fail(report, "R=" + csv::format(R) + ": rel_err " + csv::format(rel_err) + " > tol " + csv::format(cfg.tol));
    }
    return report;
}

ExperimentReport exp_liouville_collapse(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto spectrum = make_spectrum(cfg);
    const auto warping = make_warping(cfg);
    const auto h0 = unit_sup_boundary(cfg, *spectrum);
    const double mean = h0.quadrature_mean(*spectrum);
    if (std::abs(mean) > 1e-12)
        throw ValidationError("liouville_collapse: boundary shape must have zero mean (u(O) = 0); mean = " +
                              csv::format(mean));
    const int density = grid_density(cfg);

    auto report = new_report(cfg, "liouville_collapse", {"R", "alpha", "sup_interior"});
    for (double R : cfg.r_schedule) {
        double alpha = 0.0;
        if (cfg.amplitude == "log_r") alpha = std::log(R);
        else if (cfg.amplitude == "constant") alpha = 1.0;
        else if (cfg.amplitude == "phi1") {
            const auto grid = geometric_grid(1e-3 * std::min(1.0, R), R, 64);
            alpha = std::exp(solve_profile(warping, cfg.n, spectrum->band(1).lambda_sq, grid).log_value(R));
        }
        const auto u = extend(h0.scaled(alpha), R, spectrum, warping, cfg.n);
        report.rows.push_back({R, alpha, u.sup_norm(cfg.r0, density)});
    }

    const auto& rows = report.rows;
    if (cfg.amplitude == "phi1") {
        const double first = rows.front()[2];
        for (const auto& row : rows)
            if (!(std::abs(row[2] - first) <= cfg.tol * std::abs(first)))
                fail(report, "R=" + csv::format(row[0]) + ": interior sup " + csv::format(row[2]) +
                                 " deviates from constant " + csv::format(first));
    } else if (cfg.amplitude == "zero") {
        for (const auto& row : rows)
            if (row[2] != 0.0) fail(report, "R=" + csv::format(row[0]) + ": nonzero interior sup");
    } else {
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i][2] > rows[i - 1][2] * (1.0 + 1e-12))
                fail(report, "R=" + csv::format(rows[i][0]) + ": interior sup increased");
        if (!(rows.back()[2] < cfg.collapse_tol))
            fail(report, "largest R: interior sup " + csv::format(rows.back()[2]) + " not below " +
                             csv::format(cfg.collapse_tol));
    }
    return report;
}

ExperimentReport exp_bound_comparison(const ExperimentConfig& cfg) {
    validate(cfg);
    auto report = new_report(cfg, "bound_comparison", {"n", "lambda1", "bound_exp", "true_exp", "gap"});
    for (int n : cfg.dims) {
        if (n < 3) throw ConfigError("bound_comparison: dimensions must be >= 3");
        const double lambda1 = cfg.lambda1.value_or(std::sqrt(static_cast<double>(n - 1)));
        const double bound = euclidean_exponent(n, lambda1);
        const double truth = indicial_exponent(n, lambda1 * lambda1);
        report.rows.push_back({static_cast<double>(n), lambda1, bound, truth, truth - bound});
        if (!(bound <= truth + 1e-12))
            fail(report, "n=" + std::to_string(n) + ": bound exponent exceeds the growth exponent");
    }
    return report;
}

ExperimentReport exp_growth_fit(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto warping = make_warping(cfg);
    if (warping.kind() != WarpingKind::Euclidean)
        throw ConfigError("growth_fit: expected exponents are known only for the euclidean warping");
    if (!(cfg.fit_r_min > 0.0) || cfg.fit_r_max / cfg.fit_r_min < 10.0 * (1.0 - 1e-12))
        throw ConfigError("growth_fit: the fit grid must span at least one decade");
    if (cfg.fit_r_max > warping.r_max()) throw ConfigError("growth_fit: fit_r_max exceeds r_max");

    std::vector<double> eigenvalues = cfg.lambda_sq;
    if (eigenvalues.empty())
        for (int m = 0; m <= cfg.m_max; ++m) eigenvalues.push_back(static_cast<double>(m) * (m + cfg.n - 2));

    const auto grid = geometric_grid(cfg.fit_r_min, cfg.fit_r_max, 32);
    SolveOptions options;
    options.force_integration = true;

    auto report = new_report(cfg, "growth_fit", {"m", "fitted_exp", "expected_exp", "rel_err"});
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const auto profile = solve_profile(warping, cfg.n, eigenvalues[i], grid, options);
        // Least-squares slope of log phi_m against log r over the last decade.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int count = 0;
        for (double r : grid) {
            if (r < cfg.fit_r_max / 10.0 * (1.0 - 1e-12)) continue;
            const double x = std::log(r);
            const double y = profile.log_value(r);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++count;
        }
        const double fitted = (count * sxy - sx * sy) / (count * sxx - sx * sx);
        const double expected = indicial_exponent(cfg.n, eigenvalues[i]);
        const double rel_err = expected == 0.0 ? std::abs(fitted) : std::abs(fitted - expected) / expected;
        report.rows.push_back({static_cast<double>(i), fitted, expected, rel_err});
        if (!(rel_err <= cfg.fit_tol))
            fail(report, "mode " + std::to_string(i) + ": rel_err " + csv::format(rel_err) + " > " +
                             csv::format(cfg.fit_tol));
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const auto name = canonical_name(cfg.experiment);
    auto resolved = cfg;
    resolved.experiment = name;
    if (name == "mode_decay") return exp_mode_decay(resolved);
    if (name == "liouville_collapse") return exp_liouville_collapse(resolved);
    if (name == "bound_comparison") return exp_bound_comparison(resolved);
    if (name == "growth_fit") return exp_growth_fit(resolved);
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

std::string ExperimentReport::body() const {
    std::ostringstream out;
    csv::write_header(out, columns);
    for (const auto& row : rows) csv::write_row(out, row);
    return out.str();
}

void ExperimentReport::write(std::ostream& out) const {
    out << "# " << config.dump() << '\n' << body();
}

} // namespace conharm
