// Exact self-similar Riemann solutions for the isentropic system, including
// vacuum, interior two-wave problems and the four wall-reflection cases.
#pragma once

#include <vector>

#include "euler1d/gas.hpp"

namespace euler1d {

enum class WaveKind {
    Shock1,
    Shock2,
    Rarefaction1,
    Rarefaction2,
    Vacuum,
    ContactWithWall,
};

struct Wave {
    WaveKind kind = WaveKind::Vacuum;
    double speed_left = 0.0;
    double speed_right = 0.0;  // == speed_left for shocks
    GasState left_state;
    GasState right_state;
};

// Wall-problem classification; None for interior fans.
enum class WallCase { None, Shock, Rarefaction, RarefactionVacuum, Vacuum };

// Ordered self-similar solution.  Waves have nondecreasing speeds and share
// intermediate states; sampling outside all waves returns the end states.
struct WaveFan {
    std::vector<Wave> waves;
    GasState left_state;
    GasState right_state;
    WallCase wall_case = WallCase::None;
};

// Densities below this are treated as exact vacuum before solving.
inline constexpr double kVacuumSnap = 1e-14;

// S(rho, rho0): mass-flux speed along the Hugoniot; equals rho0^theta when
// rho == rho0.  rho0 == 0 with rho > 0 is rejected (vacuum-adjacent).
double wave_speed_S(double rho, double rho0, const ModelParams& p);

// Velocity reached from left state (rho_l, v_l) along the 1-family Hugoniot
// at density rho (both branches), and the corresponding front speed.
double hugoniot1_velocity(double rho, double rho_l, double v_l, const ModelParams& p);
double hugoniot1_speed(double rho, double rho_l, double v_l, const ModelParams& p);

// Reflection problem at the right wall x = 1 for left data u_minus; the
// returned fan lives in the similarity variable xi = (x-1)/(t-t_n) <= 0 and
// its right_state is the wall trace (momentum 0).
WaveFan solve_wall_right(const GasState& u_minus, const ModelParams& p);

// Mirror image at x = 0; fan lives in xi >= 0, left_state is the wall trace.
WaveFan solve_wall_left(const GasState& u_plus, const ModelParams& p);

WaveFan solve_interior(const GasState& ul, const GasState& ur, const ModelParams& p);

GasState sample(const WaveFan& fan, double xi, const ModelParams& p);

// sigma [eta_*] - [q_*] across a front (jump taken right minus left).
double entropy_production(const GasState& l, const GasState& r, double sigma,
                          const ModelParams& p);

// Max norm of the Rankine-Hugoniot defect for a front.
double rh_residual(const GasState& l, const GasState& r, double sigma, const ModelParams& p);

}  // namespace euler1d
