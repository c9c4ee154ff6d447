#include "euler1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace euler1d {

namespace {

// Polynomial bump 16 s^2 (1-s)^2: compactly supported, C^1 at the support
// edges and kink-free inside, so the Gauss rules integrate it exactly.
double bump(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double q = s * (1.0 - s);
    return 16.0 * q * q;
}

double bump_d(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 32.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

// Ramp-down profile for functions anchored at t = 0: starts at 1 with zero
// slope at both ends of the support.
double ramp(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return 1.0 - s * s * (3.0 - 2.0 * s);
}

double ramp_d(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return -6.0 * s * (1.0 - s);
}

constexpr double kGaussX3[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double kGaussW3[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace

double TestFunction::value(double x, double t) const {
    const double sx = (x - x0) / (x1 - x0);
    const double st = (t - t0) / (t1 - t0);
    const double gt = anchored_at_t0 ? ((st >= 1.0) ? 0.0 : ramp(st)) : bump(st);
    return bump(sx) * gt;
}

double TestFunction::dx(double x, double t) const {
    const double sx = (x - x0) / (x1 - x0);
    const double st = (t - t0) / (t1 - t0);
    const double gt = anchored_at_t0 ? ((st >= 1.0) ? 0.0 : ramp(st)) : bump(st);
    return bump_d(sx) / (x1 - x0) * gt;
}

double TestFunction::dt(double x, double t) const {
    const double sx = (x - x0) / (x1 - x0);
    const double st = (t - t0) / (t1 - t0);
    const double gt = anchored_at_t0 ? ramp_d(st) : bump_d(st);
    return bump(sx) * gt / (t1 - t0);
}

std::vector<TestFunction> standard_test_suite(double tfinal) {
    const double T = tfinal;
    std::vector<TestFunction> suite;
    // Interior space-time bumps on dyadic-style subrectangles.
    suite.push_back({0.10, 0.50, 0.05 * T, 0.50 * T, false});
    suite.push_back({0.50, 0.90, 0.05 * T, 0.50 * T, false});
    suite.push_back({0.25, 0.75, 0.25 * T, 0.75 * T, false});
    suite.push_back({0.05, 0.95, 0.05 * T, 0.95 * T, false});
    suite.push_back({0.30, 0.55, 0.40 * T, 0.90 * T, false});
    suite.push_back({0.55, 0.80, 0.40 * T, 0.90 * T, false});
    suite.push_back({0.15, 0.40, 0.10 * T, 0.35 * T, false});
    suite.push_back({0.60, 0.85, 0.55 * T, 0.80 * T, false});
    suite.push_back({0.40, 0.60, 0.60 * T, 0.95 * T, false});
    // Anchored at t = 0: these exercise the initial-data terms.
    suite.push_back({0.10, 0.60, 0.0, 0.40 * T, true});
    suite.push_back({0.40, 0.90, 0.0, 0.60 * T, true});
    suite.push_back({0.20, 0.80, 0.0, 0.85 * T, true});
    return suite;
}

WeakFormAccumulator::WeakFormAccumulator(std::vector<TestFunction> suite, const Simulation& sim)
    : suite_(std::move(suite)) {
    residuals_.assign(suite_.size(), {});
    for (const TestFunction& tf : suite_) {
        x_edges_.push_back(tf.x0);
        x_edges_.push_back(tf.x1);
        t_edges_.push_back(tf.t0);
        t_edges_.push_back(tf.t1);
    }
    std::sort(x_edges_.begin(), x_edges_.end());
    std::sort(t_edges_.begin(), t_edges_.end());

    // Initial-data terms from the starting cell averages; the quadrature is
    // split at the support edges so the polynomial profiles integrate
    // exactly.
    const Grid& g = sim.grid();
    const auto& cells = sim.cells();
    for (int i = 0; i < g.nx; ++i) {
        std::vector<double> cuts{g.cell_left(i), g.cell_center(i), g.cell_right(i)};
        for (double e : x_edges_)
            if (e > cuts.front() && e < cuts.back()) cuts.push_back(e);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double half = 0.5 * (cuts[s + 1] - cuts[s]);
            if (half <= 0.0) continue;
            const double mid = 0.5 * (cuts[s] + cuts[s + 1]);
            for (int k = 0; k < 3; ++k) {
                const double x = mid + half * kGaussX3[k];
                const double w = half * kGaussW3[k];
                for (std::size_t f = 0; f < suite_.size(); ++f) {
                    const double phi = suite_[f].value(x, 0.0);
                    residuals_[f].mass_eq += w * cells[i].rho * phi;
                    residuals_[f].momentum_eq += w * cells[i].m * phi;
                }
            }
        }
    }
}

void WeakFormAccumulator::on_strip(const StripSet& strip, const ModelParams& p, const Grid&) {
    // Time quadrature split at support edges crossing the strip.
    std::vector<double> tcuts{strip.t_n, strip.t_n + strip.dt};
    for (double e : t_edges_)
        if (e > tcuts.front() && e < tcuts.back()) tcuts.push_back(e);
    std::sort(tcuts.begin(), tcuts.end());

    for (const StripPiece& piece : strip.pieces) {
        std::vector<double> xcuts{piece.x_left, piece.x_right};
        for (double e : x_edges_)
            if (e > piece.x_left && e < piece.x_right) xcuts.push_back(e);
        std::sort(xcuts.begin(), xcuts.end());

        for (std::size_t ts = 0; ts + 1 < tcuts.size(); ++ts) {
            const double thalf = 0.5 * (tcuts[ts + 1] - tcuts[ts]);
            if (thalf <= 0.0) continue;
            const double tmid = 0.5 * (tcuts[ts] + tcuts[ts + 1]);
            for (int kt = 0; kt < 3; ++kt) {
                const double t = tmid + thalf * kGaussX3[kt];
                const double wt = thalf * kGaussW3[kt];
                for (std::size_t xs = 0; xs + 1 < xcuts.size(); ++xs) {
                    visit_transport_quadrature(
                        piece, xcuts[xs], xcuts[xs + 1], t, p,
                        [&](const GasState& u, double x, double wx) {
                            const double w = wt * wx;
                            const double f2 =
                                (u.rho > 0.0 ? u.m * u.m / u.rho : 0.0) + pressure(u.rho, p);
                            const double eta = mechanical_energy(u, p);
                            const double q = energy_flux(u, p);
                            for (std::size_t f = 0; f < suite_.size(); ++f) {
                                const TestFunction& tf = suite_[f];
                                if (x <= tf.x0 || x >= tf.x1 || t <= tf.t0 || t >= tf.t1)
                                    continue;
                                const double pt = tf.dt(x, t);
                                const double px = tf.dx(x, t);
                                residuals_[f].mass_eq += w * (u.rho * pt + u.m * px);
                                residuals_[f].momentum_eq += w * (u.m * pt + f2 * px);
                                // The entropy inequality admits only test
                                // functions vanishing at t = 0.
                                if (!tf.anchored_at_t0)
                                    residuals_[f].entropy += w * (eta * pt + q * px);
                            }
                        });
                }
            }
        }
    }
}

double WeakFormAccumulator::max_abs_residual() const {
    double m = 0.0;
    for (const WeakResidual& r : residuals_)
        m = std::max({m, std::abs(r.mass_eq), std::abs(r.momentum_eq)});
    return m;
}

double WeakFormAccumulator::min_entropy() const {
    double m = 1e300;
    for (std::size_t f = 0; f < residuals_.size(); ++f)
        if (!suite_[f].anchored_at_t0) m = std::min(m, residuals_[f].entropy);
    return m;
}

std::vector<SnapshotMetrics> snapshot_metrics(const Trajectory& traj) {
    std::vector<SnapshotMetrics> out;
    out.reserve(traj.rows.size());
    for (const LedgerRow& r : traj.rows) {
        SnapshotMetrics m;
        m.t = r.t;
        m.total_mass = r.mass;
        m.total_energy = r.energy;
        m.min_ztilde = r.min_ztilde;
        m.max_wtilde = r.max_wtilde;
        m.envelope_M = r.Mn + r.Ln;
        m.entropy_production_cum = r.entropy_prod_cum;
        m.bound_violation =
            std::max({0.0, r.max_wtilde - (r.Mn + r.Ln) - r.entropy_prod_cum,
                      -(r.Mn + r.Ln) - r.min_ztilde});
        out.push_back(m);
    }
    return out;
}

std::vector<ConservationPoint> conservation_report(const Trajectory& traj) {
    std::vector<ConservationPoint> out;
    out.reserve(traj.rows.size());
    const double mass0 = traj.rows.front().mass;
    const double energy0 = traj.rows.front().energy;
    for (const LedgerRow& r : traj.rows)
        out.push_back({r.t, std::abs(r.mass - mass0), std::max(0.0, r.energy - energy0)});
    return out;
}

AttractorMetric attractor_metric(const Trajectory& traj, double tol, int persistence) {
    AttractorMetric m;
    m.predicted_t0 = traj.params.t0;
    const double target = traj.params.M_infinity + traj.params.epsilon + tol;
    const auto& rows = traj.rows;
    m.envelope.reserve(rows.size());
    for (const LedgerRow& r : rows) m.envelope.push_back(r.Mn + r.Ln);

    auto inside = [&](const LedgerRow& r) {
        return r.max_wtilde <= target && r.min_ztilde >= -target;
    };
    const int n = static_cast<int>(rows.size());
    int entry = -1;
    for (int i = 0; i < n; ++i) {
        if (!inside(rows[i])) continue;
        bool persistent = true;
        for (int k = i; k < std::min(i + persistence, n); ++k)
            if (!inside(rows[k])) {
                persistent = false;
                break;
            }
        if (persistent) {
            entry = i;
            break;
        }
    }
    if (entry < 0) return m;
    m.t_entry = rows[entry].t;
    for (int i = entry; i < n; ++i)
        if (!inside(rows[i])) m.exited_after_entry = true;
    return m;
}

ConvergencePair self_convergence(const Trajectory& coarse, const Trajectory& fine) {
    ConvergencePair out;
    out.nx_coarse = coarse.grid.nx;
    out.nx_fine = fine.grid.nx;
    if (fine.grid.nx != 2 * coarse.grid.nx)
        throw std::invalid_argument("self_convergence expects nested resolutions");
    const double wf = 1.0 / fine.grid.nx;  // fine cell width
    for (int j = 0; j < fine.grid.nx; ++j) {
        const GasState& uf = fine.final_cells[j];
        const GasState& uc = coarse.final_cells[j / 2];
        out.l1_rho += std::abs(uf.rho - uc.rho) * wf;
        out.l1_m += std::abs(uf.m - uc.m) * wf;
    }
    return out;
}

EntropyAudit entropy_ledger_audit(const Trajectory& traj) {
    EntropyAudit audit;
    const double seam_defect = 1e-6;
    const double fan_budget =
        10.0 * std::pow(traj.grid.dx, 3.0 * traj.opts.alpha) + 1e-12;
    double min_shock = 1e300, min_fan = 1e300;
    for (const FrontRecord& f : traj.fronts) {
        audit.entries.push_back({f.step, f.kind, f.production});
        if (f.rh_defect > seam_defect) {
            ++audit.seam_count;
            continue;
        }
        if (f.kind == WaveKind::Shock1 || f.kind == WaveKind::Shock2) {
            ++audit.shock_count;
            min_shock = std::min(min_shock, f.production);
        } else {
            ++audit.fan_count;
            min_fan = std::min(min_fan, f.production);
        }
    }
    audit.min_shock_production = audit.shock_count ? min_shock : 0.0;
    audit.min_fan_production = audit.fan_count ? min_fan : 0.0;
    audit.ok = audit.min_shock_production >= -1e-10 && audit.min_fan_production >= -fan_budget;
    return audit;
}

}  // namespace euler1d
