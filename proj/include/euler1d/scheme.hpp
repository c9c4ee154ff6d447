// The modified Godunov time stepper: grid and CFL setup, cell averaging,
// the invariant-region cutoff, the (L_n, M_n) ledgers, wall treatment
// (reflection cases 1-4 with two-stage corrected states), discrete
// rarefaction fans and strip assembly.
#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "euler1d/corrected.hpp"

namespace euler1d {

enum class SchemeMode { Modified, PlainGodunov };

struct SchemeOptions {
    SchemeMode mode = SchemeMode::Modified;
    double alpha = 0.75;     // rarefaction-fan spacing exponent
    double beta_vac = 1.2;   // vacuum-threshold exponent for cell averages
    double beta_rar = 0.25;  // near-vacuum exponent for the wall construction
    double bound_slack = 1.0;   // envelope-check slack coefficient (times sqrt(dx))
    double budget_slack = 1.0;  // strip budget slack coefficient (times dx^1.5)
    int samples_per_cell = 4;
    bool strict_checks = true;  // abort on violated scheme invariants
};

struct SchemeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    int nx = 0;        // cells indexed by odd j in {1, ..., 2nx-1}
    double dx = 0.0;   // 1/(2 nx)
    double dt = 0.0;   // dx / ratio
    int ratio = 0;     // odd integer from the CFL rule
    long n_steps = 0;  // steps needed to cover tfinal
    double tfinal = 0.0;

    double cell_left(int i) const { return 2.0 * i * dx; }
    double cell_center(int i) const { return (2.0 * i + 1) * dx; }
    double cell_right(int i) const { return 2.0 * (i + 1) * dx; }
};

Grid make_grid(const ModelParams& p, double tfinal, int nx);

// Envelope sequence rule: decrement while M_n + L_n sits at or above the
// asymptotic level.
double envelope_step(double Mn, double Ln, const ModelParams& p, double dt);

struct StepLedger {
    long n = 0;
    double Mn = 0.0;
    double Ln = 0.0;
    std::vector<double> I;  // I_j at cell centres, from the pre-cutoff averages
    double entropy_production_step = 0.0;  // booked dissipation of the last strip
    double fan_defect_step = 0.0;          // excluded expansion-front defect (<= 0)
    double jensen_gap_step = 0.0;
    double quad_remainder_step = 0.0;
    double entropy_production_cum = 0.0;
    double budget_residual_step = 0.0;  // strip zeta-mass bookkeeping defect
    long cutoff_events = 0;
    long vacuum_snaps = 0;
};

struct LedgerRow {
    long n = 0;
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double Ln = 0.0;
    double Mn = 0.0;
    double I_2Nx = 0.0;
    double min_ztilde = 0.0;
    double max_wtilde = 0.0;
    double entropy_prod_cum = 0.0;
};

struct Snapshot {
    long n = 0;
    double t = 0.0;
    std::vector<double> x, rho, m, v, z, w, ztilde, wtilde;
};

// One time strip: the pieces tile [0,1]; piece k covers the dx-neighbourhood
// of interface x_{2k} (clipped to the walls).
struct StripSet {
    double t_n = 0.0;
    double dt = 0.0;
    std::vector<StripPiece> pieces;
};

class StripObserver {
  public:
    virtual ~StripObserver() = default;
    virtual void on_strip(const StripSet& strip, const ModelParams& p, const Grid& g) = 0;
};

// Invariant-region clamp of an averaged state (with the vacuum threshold).
GasState cutoff(const GasState& average, double I_j, double Mn, double Ln, double vac_threshold,
                const ModelParams& p, bool* changed = nullptr);

// Integral over [a, b] of fn evaluated on the transport field at time t;
// exact on constant parts, Gauss rule inside fan interiors.
double integrate_transport_fn(const StripPiece& piece, double a, double b, double t,
                              const ModelParams& p,
                              const std::function<double(const GasState&, double)>& fn);

// Visit the Gauss nodes of the transport decomposition of [a, b] at time t:
// cb(state, x, weight) with the weights summing to b - a.
void visit_transport_quadrature(const StripPiece& piece, double a, double b, double t,
                                const ModelParams& p,
                                const std::function<void(const GasState&, double, double)>& cb);

// Discrete 1-family rarefaction fan from u_minus up to invariant value
// z_plus: successive states tied by exact jump conditions, strictly
// increasing speeds.  step = (dx)^alpha.
struct FanStep {
    GasState state;  // state right of the front
    double sigma;    // front speed
};
std::vector<FanStep> build_rarefaction_fan(const GasState& u_minus, double z_plus, double step,
                                           const ModelParams& p);
// 2-family mirror: from u_plus down to invariant value w_minus; returned
// left-to-right (decreasing w towards the left).
std::vector<FanStep> build_rarefaction_fan2(const GasState& u_plus, double w_minus, double step,
                                            const ModelParams& p);

class Simulation {
  public:
    Simulation(const ModelParams& p, const Grid& g, const SchemeOptions& opts,
               const InitSampler& u0);
    Simulation(const ModelParams& p, const Grid& g, const SchemeOptions& opts,
               std::vector<GasState> cells);

    void add_observer(StripObserver* obs) { observers_.push_back(obs); }
    void remove_observer(StripObserver* obs) {
        std::erase(observers_, obs);
    }

    void advance();

    const std::vector<GasState>& cells() const { return cells_; }
    const StepLedger& ledger() const { return ledger_; }
    const LedgerRow& row() const { return row_; }
    const Snapshot& snapshot() const { return snap_; }
    const Grid& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const SchemeOptions& options() const { return opts_; }
    double time() const { return static_cast<double>(ledger_.n) * grid_.dt; }

    // Strip construction and averaging, exposed for tests and observers.
    StripSet build_strip() const;
    GasState cell_average_transport(const StripSet& strip, int cell, double t) const;
    GasState cell_average_corrected(std::vector<PieceEvaluator>& evals, int cell,
                                    double t) const;

  private:
    void init_row_and_snapshot();
    StripPiece build_interior_piece(int k) const;
    StripPiece build_wall_right_piece(double Mnp1) const;
    StripPiece build_wall_left_piece(double Mnp1) const;
    void check_cfl(const StripSet& strip) const;

    ModelParams params_;
    Grid grid_;
    SchemeOptions opts_;
    std::vector<GasState> cells_;
    StepLedger ledger_;
    LedgerRow row_;
    Snapshot snap_;
    std::vector<StripObserver*> observers_;
};

struct FrontRecord {
    long step = 0;
    WaveKind kind = WaveKind::Shock1;
    double production = 0.0;  // sigma [eta_*] - [q_*]
    double rh_defect = 0.0;
};

struct Trajectory {
    ModelParams params;
    Grid grid;
    SchemeOptions opts;
    std::vector<LedgerRow> rows;        // one per step, including the initial state
    std::vector<Snapshot> snapshots;    // every snap_every steps plus the final one
    std::vector<long> snapshot_steps;
    std::vector<GasState> final_cells;
    std::vector<FrontRecord> fronts;    // per-strip discontinuity records
    long cutoff_events = 0;
    long vacuum_snaps = 0;
};

Trajectory run_to_completion(Simulation& sim, long snap_every = 1);

}  // namespace euler1d
