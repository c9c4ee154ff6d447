// Independent verification layer: conservation and energy ledgers, attractor
// and invariant-region metrics, weak-form residuals, refinement studies and
// the per-front entropy audit.
#pragma once

#include <limits>
#include <string>
#include <vector>

#include "euler1d/scheme.hpp"

namespace euler1d {

struct SnapshotMetrics {
    double t = 0.0;
    double total_mass = 0.0;
    double total_energy = 0.0;
    double min_ztilde = 0.0;
    double max_wtilde = 0.0;
    double envelope_M = 0.0;  // M_n + L_n
    double bound_violation = 0.0;
    double entropy_production_cum = 0.0;
};

std::vector<SnapshotMetrics> snapshot_metrics(const Trajectory& traj);

struct ConservationPoint {
    double t = 0.0;
    double mass_drift = 0.0;
    double energy_excess = 0.0;
};

std::vector<ConservationPoint> conservation_report(const Trajectory& traj);

struct AttractorMetric {
    double t_entry = std::numeric_limits<double>::infinity();
    double predicted_t0 = 0.0;
    bool exited_after_entry = false;
    std::vector<double> envelope;  // M_n + L_n per row
};

// Entry time of the shifted invariants into the asymptotic envelope
// (+-(M_infinity + epsilon) with tolerance), requiring persistence over
// `persistence` consecutive rows.
AttractorMetric attractor_metric(const Trajectory& traj, double tol, int persistence = 10);

// C^1 piecewise-cubic bump test functions, tensor products on rectangles.
struct TestFunction {
    double x0 = 0.0, x1 = 1.0;
    double t0 = 0.0, t1 = 1.0;
    bool anchored_at_t0 = false;  // time profile starts at 1 when t0 == 0

    double value(double x, double t) const;
    double dx(double x, double t) const;
    double dt(double x, double t) const;
};

std::vector<TestFunction> standard_test_suite(double tfinal);

struct WeakResidual {
    double mass_eq = 0.0;      // mass weak form, signed
    double momentum_eq = 0.0;  // momentum weak form, signed
    double entropy = 0.0;      // entropy inequality integral, sign reported
};

// Observer accumulating the weak-form integrals of a run; the initial-data
// terms are added at construction from the simulation's starting cells.
class WeakFormAccumulator : public StripObserver {
  public:
    WeakFormAccumulator(std::vector<TestFunction> suite, const Simulation& sim);

    void on_strip(const StripSet& strip, const ModelParams& p, const Grid& g) override;

    const std::vector<WeakResidual>& residuals() const { return residuals_; }
    double max_abs_residual() const;
    double min_entropy() const;

  private:
    std::vector<TestFunction> suite_;
    std::vector<WeakResidual> residuals_;
    std::vector<double> x_edges_;  // support edges, quadrature split points
    std::vector<double> t_edges_;
};

struct ConvergencePair {
    int nx_coarse = 0;
    int nx_fine = 0;
    double l1_rho = 0.0;
    double l1_m = 0.0;
};

// L1 distances between the final cell averages of nested resolutions.
ConvergencePair self_convergence(const Trajectory& coarse, const Trajectory& fine);

struct EntropyAuditEntry {
    long step = 0;
    WaveKind kind = WaveKind::Shock1;
    double production = 0.0;
};

struct EntropyAudit {
    std::vector<EntropyAuditEntry> entries;
    double min_shock_production = 0.0;
    double min_fan_production = 0.0;
    long shock_count = 0;
    long fan_count = 0;
    long seam_count = 0;  // clamp boundaries, not jump-condition fronts
    bool ok = true;
};

// Every recorded front's production listed; dissipation fronts must be
// nonnegative to rounding, fan fronts stay within their cubic-small budget.
EntropyAudit entropy_ledger_audit(const Trajectory& traj);

}  // namespace euler1d
