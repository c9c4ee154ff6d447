#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "euler1d/diagnostics.hpp"
#include "euler1d/driver.hpp"
#include "euler1d/init.hpp"

using namespace euler1d;

namespace {

RunConfig quick_config(const std::string& init, int nx, double tfinal,
                       SchemeMode mode = SchemeMode::Modified) {
    RunConfig cfg;
    cfg.init = init;
    cfg.nx = nx;
    cfg.tfinal = tfinal;
    cfg.mode = mode;
    return cfg;
}

}  // namespace

TEST_CASE("conservation report on constant and vacuum data") {
    {
        const auto traj = run_from_config(quick_config("constant", 8, 0.1), {}, false).trajectory;
        const auto rep = conservation_report(traj);
        for (const auto& pt : rep) {
            CHECK(pt.mass_drift <= 1e-12);
            CHECK(pt.energy_excess <= 1e-12);
        }
    }
    {
        const ModelParams p = derive_params([](double) { return GasState{1.0, 0.0}; },
                                            5.0 / 3.0, 0.1, 0.01);
        const Grid g = make_grid(p, 0.05, 6);
        SchemeOptions opts;
        std::vector<GasState> cells(g.nx, GasState{0.0, 0.0});
        Simulation sim(p, g, opts, cells);
        const Trajectory traj = run_to_completion(sim);
        const auto rep = conservation_report(traj);
        CHECK(rep.back().mass_drift == 0.0);
    }
}

TEST_CASE("attractor entry is immediate for data already inside") {
    const auto traj = run_from_config(quick_config("constant", 10, 0.2), {}, false).trajectory;
    const AttractorMetric m = attractor_metric(traj, 10.0 * traj.grid.dx, 10);
    CHECK(m.predicted_t0 == 0.0);
    CHECK(m.t_entry == 0.0);
    CHECK(!m.exited_after_entry);
    for (double e : m.envelope) CHECK(e == doctest::Approx(traj.params.M0));
}

TEST_CASE("test function suite is C1, compactly supported and nonnegative") {
    const auto suite = standard_test_suite(1.0);
    CHECK(suite.size() == 12);
    for (const TestFunction& tf : suite) {
        CHECK(tf.value(tf.x0, 0.5 * (tf.t0 + tf.t1)) == 0.0);
        CHECK(tf.value(tf.x1, 0.5 * (tf.t0 + tf.t1)) == 0.0);
        CHECK(tf.value(0.5 * (tf.x0 + tf.x1), tf.t1) == 0.0);
        CHECK(tf.value(0.5 * (tf.x0 + tf.x1), tf.t1 + 0.1) == 0.0);
        // interior nonnegativity and consistent derivatives
        const double x = 0.5 * (tf.x0 + tf.x1);
        const double t = 0.5 * (tf.t0 + tf.t1);
        CHECK(tf.value(x, t) > 0.0);
        const double h = 1e-6;
        CHECK(tf.dx(x + h, t) ==
              doctest::Approx((tf.value(x + 2 * h, t) - tf.value(x, t)) / (2 * h)).epsilon(1e-4));
        CHECK(tf.dt(x, t + h) ==
              doctest::Approx((tf.value(x, t + 2 * h) - tf.value(x, t)) / (2 * h)).epsilon(1e-4));
        if (tf.anchored_at_t0) CHECK(tf.value(x, 0.0) > 0.0);
    }
}

TEST_CASE("weak residuals vanish on an exact constant solution") {
    const RunConfig cfg = quick_config("constant", 16, 0.4);
    const ModelParams params = params_from_config(cfg);
    const Grid grid = make_grid(params, cfg.tfinal, cfg.nx);
    SchemeOptions opts;
    Simulation sim(params, grid, opts, sampler_from_config(cfg));
    WeakFormAccumulator acc(standard_test_suite(cfg.tfinal), sim);
    sim.add_observer(&acc);
    for (long n = 0; n < grid.n_steps; ++n) sim.advance();
    CHECK(acc.max_abs_residual() <= 1e-10);
}

TEST_CASE("weak residuals of the stationary shock are quadrature-small") {
    // The observation window keeps clear of the wall reflections and their
    // cell-by-cell numerical precursor.
    const RunConfig cfg = quick_config("stationary-shock", 50, 0.06, SchemeMode::PlainGodunov);
    const ModelParams params = params_from_config(cfg);
    const Grid grid = make_grid(params, cfg.tfinal, cfg.nx);
    SchemeOptions opts;
    opts.mode = cfg.mode;
    Simulation sim(params, grid, opts, sampler_from_config(cfg));
    std::vector<TestFunction> window;
    window.push_back({0.40, 0.60, 0.0, 0.05, true});
    window.push_back({0.42, 0.58, 0.005, 0.05, false});
    WeakFormAccumulator acc(window, sim);
    sim.add_observer(&acc);
    for (long n = 0; n < grid.n_steps; ++n) sim.advance();
    CHECK(acc.max_abs_residual() <= 1e-6);
    CHECK(acc.min_entropy() >= -1e-10);
}

TEST_CASE("self-convergence distances") {
    // Identical final states: zero distance.
    const auto a = run_from_config(quick_config("constant", 10, 0.1), {}, false).trajectory;
    const auto b = run_from_config(quick_config("constant", 20, 0.1), {}, false).trajectory;
    const ConvergencePair pr = self_convergence(a, b);
    CHECK(pr.l1_rho <= 1e-10);
    CHECK(pr.l1_m <= 1e-10);

    CHECK_THROWS_AS(self_convergence(a, a), std::invalid_argument);
}

TEST_CASE("entropy audit classifies fronts") {
    // Constant run: no discontinuities at all.
    {
        const auto traj =
            run_from_config(quick_config("constant", 8, 0.1), {}, false).trajectory;
        const EntropyAudit audit = entropy_ledger_audit(traj);
        CHECK(audit.entries.empty());
        CHECK(audit.ok);
    }
    // Receding gas at the right wall: fan fronts with cubic-small defect.
    {
        const auto traj =
            run_from_config(quick_config("wall-rarefaction", 16, 0.1), {}, false).trajectory;
        const EntropyAudit audit = entropy_ledger_audit(traj);
        CHECK(audit.fan_count > 0);
        CHECK(audit.min_fan_production <= 0.0);
        CHECK(audit.ok);
    }
    // Incoming gas: a genuine reflected shock with positive production.
    {
        const auto traj =
            run_from_config(quick_config("wall-shock", 16, 0.1), {}, false).trajectory;
        const EntropyAudit audit = entropy_ledger_audit(traj);
        CHECK(audit.shock_count > 0);
        bool any_positive = false;
        for (const auto& e : audit.entries)
            if ((e.kind == WaveKind::Shock1 || e.kind == WaveKind::Shock2) && e.production > 0.0)
                any_positive = true;
        CHECK(any_positive);
        CHECK(audit.min_shock_production >= -1e-10);
        CHECK(audit.ok);
    }
}

TEST_CASE("snapshot metrics expose the envelope") {
    const auto traj = run_from_config(quick_config("sine", 10, 0.1), {}, false).trajectory;
    const auto metrics = snapshot_metrics(traj);
    CHECK(metrics.size() == traj.rows.size());
    for (const auto& m : metrics) {
        CHECK(m.total_mass > 0.0);
        CHECK(m.total_energy > 0.0);
        CHECK(m.envelope_M >= traj.params.M0 - 1e-12);
        CHECK(m.bound_violation <= std::sqrt(traj.grid.dx));
        CHECK(m.entropy_production_cum >= 0.0);
    }
}

TEST_CASE("near-vacuum preset triggers the vacuum threshold") {
    const auto traj = run_from_config(quick_config("near-vacuum", 25, 0.1), {}, false).trajectory;
    bool any_vacuum = false;
    for (const GasState& u : traj.final_cells)
        if (u.rho == 0.0) any_vacuum = true;
    CHECK(any_vacuum);
    // Conservation still sane.
    const auto rep = conservation_report(traj);
    CHECK(rep.back().mass_drift <= 1e-2);
}
