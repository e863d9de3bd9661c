// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "conharm/dirichlet.hpp"
#include "conharm/experiments.hpp"
#include "conharm/liouville.hpp"
#include "conharm/link_spectrum.hpp"
#include "conharm/radial_solver.hpp"
#include "conharm/warping.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

using namespace conharm;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

double gram_defect(const LinkSpectrum& s) {
    const int modes = s.mode_count();
    std::vector<double> gram(static_cast<std::size_t>(modes) * modes, 0.0);
    for (std::size_t i = 0; i < s.node_count(); ++i) {
        const auto row = s.node_mode_values(i);
        const double w = s.weights()[i];
        for (int a = 0; a < modes; ++a) {
            const double wa = w * row[a];
            for (int b = a; b < modes; ++b) gram[a * modes + b] += wa * row[b];
        }
    }
    double defect = 0.0;
    for (int a = 0; a < modes; ++a)
        for (int b = a; b < modes; ++b) defect = std::max(defect, std::abs(gram[a * modes + b] - (a == b ? 1.0 : 0.0)));
    return defect;
}

Outcome radial_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const auto grid = geometric_grid(0.1, 100.0, 64);
    const auto probes = geometric_grid(0.1, 100.0, 97); // mostly off the solver grid
    SolveOptions opts;
    opts.force_integration = true;
    double worst = 0.0;
    for (const auto& w : {WarpingFunction::euclidean(), WarpingFunction::hyperbolic(), WarpingFunction::bounded()})
        for (int m = 0; m <= 16; ++m) {
            const auto p = solve_profile(w, 2, double(m) * m, grid, opts);
            for (double r : probes)
                worst = std::max(worst, std::abs(std::expm1(p.log_value(r) - closed_form_2d_log(w, m, r))));
        }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-8 && seconds < 10.0,
            "max rel err " + fmt("%.2e", worst) + ", runtime " + fmt("%.2f", seconds) + " s"};
}

Outcome indicial_cross_check() {
    double worst = 0.0;
    for (int n = 2; n <= 10; ++n) {
        ExperimentConfig cfg;
        cfg.experiment = "growth_fit";
        cfg.n = n;
        cfg.m_max = 8;
        const auto rep = exp_growth_fit(cfg);
        for (const auto& row : rep.rows) {
            const double m = row[0];
            worst = std::max(worst, m == 0 ? std::abs(row[1]) : std::abs(row[1] - m) / m);
        }
    }
    return {worst <= 1e-4, "n = 2..10, m = 0..8, max rel err " + fmt("%.2e", worst)};
}

Outcome euclidean_bound() {
    double worst = 0.0;
    const auto e = WarpingFunction::euclidean();
    const auto radii = geometric_grid(1.0, 100.0, 25);
    for (int n = 3; n <= 5; ++n)
        for (double lambda1 : {std::sqrt(2.0), 2.0, 3.0, 6.0}) {
            const GrowthBound bound(BoundRegime::General, n, lambda1, e, 100.0);
            for (double r : radii) {
                if (r == 1.0) {
                    worst = std::max(worst, std::abs(bound.log_value(r)));
                    continue;
                }
                const double want = lambda1 / (std::sqrt(2.0) * (n - 2)) * std::log(r);
                worst = std::max(worst, std::abs(bound.log_value(r) - want) / want);
            }
        }
    return {worst <= 1e-8, "n = 3..5, lambda1 in {sqrt2, 2, 3, 6}, max rel err " + fmt("%.2e", worst)};
}

Outcome n3_exception() {
    const auto e = WarpingFunction::euclidean();
    const auto radii = geometric_grid(2.0, 1000.0, 8);
    const GrowthBound b3(BoundRegime::General, 3, std::sqrt(2.0), e);
    const double gamma3 = indicial_exponent(3, 2.0);
    double gap3 = 0.0;
    for (double r : radii) gap3 = std::max(gap3, std::abs(b3.log_value(r) / std::log(r) - gamma3));
    bool below = true;
    double closest = -1.0;
    for (int n = 4; n <= 10; ++n) {
        const double lambda1 = std::sqrt(n - 1.0);
        const GrowthBound b(BoundRegime::General, n, lambda1, e);
        const double gamma1 = indicial_exponent(n, n - 1.0);
        for (double r : radii) {
            const double exponent = b.log_value(r) / std::log(r);
            below = below && exponent < gamma1;
            closest = std::max(closest, exponent - gamma1);
        }
    }
    return {gap3 <= 1e-12 && below,
            "n = 3 gap " + fmt("%.2e", gap3) + "; n = 4..10 largest exponent - gamma1 = " + fmt("%.4f", closest)};
}

Outcome mode_decay() {
    double euclid = 0.0;
    for (int m = 1; m <= 3; ++m) {
        ExperimentConfig cfg;
        cfg.experiment = "mode_decay";
        cfg.boundary.m = m;
        const auto rep = exp_mode_decay(cfg);
        for (const auto& row : rep.rows) {
            const double want = std::pow(cfg.r0 / row[0], m);
            euclid = std::max(euclid, std::abs(row[1] - want) / want);
        }
    }
    double hyper = 0.0, oracle = 0.0;
    bool monotone = true;
    for (int m = 1; m <= 3; ++m) {
        ExperimentConfig cfg;
        cfg.experiment = "mode_decay";
        cfg.warping = "hyperbolic";
        cfg.boundary.m = m;
        const auto rep = exp_mode_decay(cfg);
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            const auto& row = rep.rows[i];
            hyper = std::max(hyper, row[3]);
            const double want = std::pow(std::tanh(cfg.r0 / 2) / std::tanh(row[0] / 2), m);
            oracle = std::max(oracle, std::abs(row[1] - want) / want);
            // The profile saturates (tanh(R/2) -> 1); allow integrator jitter at the 1e-12 level.
            if (i > 0) monotone = monotone && row[1] <= rep.rows[i - 1][1] * (1 + 1e-12);
        }
    }
    return {euclid <= 1e-6 && hyper <= 1e-6 && oracle <= 1e-6 && monotone,
            "Euclidean m = 1..3 vs (R0/R)^m " + fmt("%.2e", euclid) + "; hyperbolic vs profile_ratio " +
                fmt("%.2e", hyper) + ", vs tanh oracle " + fmt("%.2e", oracle) +
                (monotone ? ", monotone" : ", NOT monotone")};
}

Outcome collapse() {
    ExperimentConfig cfg;
    cfg.experiment = "liouville_collapse";
    cfg.collapse_tol = 1e-2;
    const auto rep = exp_liouville_collapse(cfg);
    const double last = rep.rows.back()[2];
    cfg.amplitude = "phi1";
    cfg.tol = 1e-6;
    const auto control = exp_liouville_collapse(cfg);
    double spread = 0.0;
    for (const auto& row : control.rows)
        spread = std::max(spread, std::abs(row[2] - control.rows.front()[2]) / control.rows.front()[2]);
    return {rep.passed && last < 1e-2 && control.passed && spread <= 1e-6,
            "sup at R = 1024: " + fmt("%.3e", last) + "; phi1 control spread " + fmt("%.2e", spread)};
}

Outcome tip_mean() {
    double worst = 0.0;
    int instances = 0;
    const auto circle = std::make_shared<const LinkSpectrum>(LinkSpectrum::build(LinkKind::Circle, 2, 8));
    const auto sphere = std::make_shared<const LinkSpectrum>(LinkSpectrum::build(LinkKind::RoundSphere2, 3, 6));
    for (const auto& w : {WarpingFunction::euclidean(), WarpingFunction::hyperbolic(), WarpingFunction::bounded()})
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const bool on_sphere = seed % 2 == 1;
            const auto& s = on_sphere ? sphere : circle;
            const auto h = BoundaryData::random_band_limited(*s, seed, s->m_max());
            const auto u = extend(h, 5.0, s, w, s->dimension());
            worst = std::max(worst, std::abs(u.tip_value() - h.quadrature_mean(*s)));
            worst = std::max(worst, std::abs(u.evaluate(0.0, {0.3, 1.2}) - h.quadrature_mean(*s)));
            ++instances;
        }
    return {worst <= 1e-10, std::to_string(instances) + " instances, max |tip - mean| " + fmt("%.2e", worst)};
}

Outcome divergence() {
    const GrowthBound flat(BoundRegime::General, 3, std::sqrt(2.0), WarpingFunction::euclidean(1e30));
    const auto a = divergence_verdict(flat, 1e30);
    const GrowthBound bounded(BoundRegime::NonnegCurvature, 3, std::sqrt(2.0), WarpingFunction::bounded(1e3));
    const auto b = divergence_verdict(bounded, 1e3);
    const GrowthBound hyper(BoundRegime::NonnegCurvature, 3, std::sqrt(2.0), WarpingFunction::hyperbolic(1e3));
    const auto c = divergence_verdict(hyper, 1e3);
    const bool ok = a.verdict == DivergenceVerdict::Diverges && b.verdict == DivergenceVerdict::Diverges &&
                    c.verdict == DivergenceVerdict::Inconclusive;
    return {ok, "flat/general " + to_string(a.verdict) + " (log A " + fmt("%.1f", a.log_A_max) + "), bounded/nonneg " +
                    to_string(b.verdict) + " (log A " + fmt("%.1f", b.log_A_max) + "), 1/sinh " + to_string(c.verdict) +
                    " (log A " + fmt("%.4f", c.log_A_max) + ")"};
}

Outcome orthonormality() {
    double circle = 0.0, sphere = 0.0;
    for (int m = 1; m <= 32; ++m) circle = std::max(circle, gram_defect(LinkSpectrum::build(LinkKind::Circle, 2, m)));
    for (int m : {1, 2, 4, 8, 12, 16})
        sphere = std::max(sphere, gram_defect(LinkSpectrum::build(LinkKind::RoundSphere2, 3, m)));
    return {circle <= 1e-10 && sphere <= 1e-10,
            "circle m_max <= 32: " + fmt("%.2e", circle) + ", sphere2 m_max <= 16: " + fmt("%.2e", sphere)};
}

Outcome determinism() {
    std::vector<ExperimentConfig> configs;
    for (const auto& name : experiment_names()) {
        ExperimentConfig cfg;
        cfg.experiment = name;
        configs.push_back(cfg);
    }
    ExperimentConfig random;
    random.experiment = "mode_decay";
    random.boundary.type = "random";
    random.boundary.band_max = 4;
    random.seed = 2024;
    random.warping = "hyperbolic";
    configs.push_back(random);
    for (const auto& cfg : configs) {
        const auto first = run_experiment(cfg).body();
        const auto second = run_experiment(cfg).body();
        if (first != second) return {false, cfg.experiment + " bodies differ"};
    }
    return {true, std::to_string(configs.size()) + " runs compared byte for byte"};
}

} // namespace

int main() {
    report(1, "radial oracle, 2-D closed form", radial_oracle);
    report(2, "indicial cross-check on the flat cone", indicial_cross_check);
    report(3, "Euclidean growth bound reproduction", euclidean_bound);
    report(4, "n = 3 exception", n3_exception);
    report(5, "mode decay", mode_decay);
    report(6, "Liouville collapse", collapse);
    report(7, "tip continuity and mean value", tip_mean);
    report(8, "divergence verdicts", divergence);
    report(9, "orthonormality", orthonormality);
    report(10, "determinism", determinism);
    return failures == 0 ? 0 : 1;
}
