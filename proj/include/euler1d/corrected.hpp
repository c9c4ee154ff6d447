// Strip pieces: the per-interface building blocks of one time strip.  A piece
// holds the wave structure emanating from one interface or wall (straight
// fronts separating constant base states, or a plain self-similar part) plus
// the two-stage corrected-state records promoting each base state to a
// space-time field carrying the zeta-integral slope and drift terms.
//
// Two evaluation flavours coexist:
//   - transport: the piecewise-constant / self-similar conserved fields that
//     carry mass and momentum (exactly integrable),
//   - corrected: the two-stage records used by the invariant-region
//     machinery (cutoff inputs, envelope checks, shifted-invariant output).
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "euler1d/riemann.hpp"

namespace euler1d {

enum class AnchorMode {
    PlainConst,    // constant base, no correction
    PlainHead,     // sampled from head_fan (left of first front)
    PlainTail,     // sampled from tail_fan (right of last front)
    FixedLeft,     // anchored at (anchor_x, t_n), anchor at piece left edge
    FixedCenter,   // anchored at (x_c, t_n)
    FixedRight,    // anchored at (anchor_x, t_n), right edge or wall
    FanHalfLeft,   // 1-family fan region, anchored at left front at t_{n+1/2}
    FanHalfRight,  // 2-family fan region, anchored at right front at t_{n+1/2}
};

struct Front {
    WaveKind kind = WaveKind::Shock1;
    double sigma = 0.0;
    GasState left;        // base states at construction
    GasState right;
    double prod_rate = 0.0;  // sigma [eta_*] - [q_*] of the base pair
    double rh_defect = 0.0;  // RH residual of the base pair (wall closure slack)
};

struct Region {
    GasState base;
    RiemannPair inv;
    double zeta_base = 0.0;
    AnchorMode mode = AnchorMode::PlainConst;
    double anchor_x = 0.0;
    double t_ref = 0.0;
    double v_anchor = 0.0;   // V at the region's reference trace
    double c1 = 0.0, c2 = 0.0;  // stage-1 drift coefficients for (z, w)
    double prod_allow = 0.0;    // production rates of fronts left of the region
};

struct StripPiece {
    double x_c = 0.0;  // interface / wall abscissa; fronts emanate from here
    double x_left = 0.0, x_right = 0.0;
    double t_n = 0.0, dt = 0.0;
    std::vector<Front> fronts;    // ordered by speed
    std::vector<Region> regions;  // fronts.size() + 1 entries
    std::optional<WaveFan> head_fan;  // plain self-similar part, leftmost region
    std::optional<WaveFan> tail_fan;  // plain self-similar part, rightmost region
    WallCase wall_case = WallCase::None;

    double front_x(int i, double t) const { return x_c + fronts[i].sigma * (t - t_n); }
    double t_half() const { return t_n + 0.5 * dt; }
    double max_front_speed() const;
};

// Conserved-variable (transport) access.  Exact where states are constant,
// closed-form across rarefaction interiors.
GasState transport_state(const StripPiece& piece, double x, double t, const ModelParams& p);

struct ConservedIntegral {
    double mass = 0.0;
    double momentum = 0.0;
};

ConservedIntegral transport_integrate(const StripPiece& piece, double a, double b, double t,
                                      const ModelParams& p);

// Closed-form integral of (rho, m) over one self-similar fan; tau = t - t_n.
ConservedIntegral fan_integrate(const WaveFan& fan, double x_anchor, double tau, double a,
                                double b, const ModelParams& p);

// Corrected-field evaluation.  Owns per-time slices (front positions and the
// chained zeta-integral at each front) and the half-time anchor references of
// the fan regions.  One evaluator serves one strip.
class PieceEvaluator {
  public:
    PieceEvaluator(const StripPiece& piece, const ModelParams& p);

    GasState corrected_state(double x, double t);

    // First-stage (check state) evaluation, exposed for refinement tests.
    GasState corrected_state_stage1(double x, double t);

    // Integral of f(u_corrected) over [a, b] at time t by per-region Gauss
    // rule; f encoded as: 0 -> zeta, 1 -> eta_*, 2 -> rho, 3 -> m.
    double corrected_integral(int f, double a, double b, double t);

    int region_of(double x, double t) const;
    const StripPiece& piece() const { return *piece_; }
    long vacuum_snap_count() const { return vacuum_snaps_; }

  private:
    struct Slice {
        double t = 0.0;
        std::vector<double> front_x;
        std::vector<double> chained;  // zeta integral from x_left to each front
    };

    const Slice& slice(double t);
    void ensure_refs();
    GasState eval_region(int r, double x, const Slice& s);
    RiemannPair stage1(const Region& reg, double y, double tau, double xl, double P) const;
    double region_zeta_integral(int r, double a, double b, const Slice& s);

    const StripPiece* piece_;
    const ModelParams* params_;
    std::vector<double> i_ref_;  // FanHalf chained-integral references
    bool refs_ready_ = false;
    std::map<double, Slice> slices_;
    long vacuum_snaps_ = 0;
};

// Drift coefficients of a corrected record: the raw sources with the envelope
// share moved into the M_n ledger and the anchor-trace flux removed, which
// makes the field transport-consistent (see notes in scheme.cpp).
void drift_coefficients(const GasState& u, double v_anchor, const ModelParams& p, double& c1,
                        double& c2);

}  // namespace euler1d
