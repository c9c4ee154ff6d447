#include "euler1d/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace euler1d {

namespace {

GasState snap_vacuum(GasState u) {
    if (u.rho < kVacuumSnap) return {0.0, 0.0};
    return u;
}

// 1-family wave curve through (rho_l, v_l): rarefaction branch for
// rho <= rho_l, Hugoniot for rho > rho_l.  Monotone decreasing in rho.
double curve1_velocity(double rho, double rho_l, double v_l, const ModelParams& p) {
    if (rho <= rho_l)
        return v_l + (std::pow(rho_l, p.theta) - std::pow(rho, p.theta)) / p.theta;
    return v_l - std::sqrt((pressure(rho, p) - pressure(rho_l, p)) * (rho - rho_l) / (rho * rho_l));
}

// 2-family wave curve through (rho_r, v_r), monotone increasing in rho.
double curve2_velocity(double rho, double rho_r, double v_r, const ModelParams& p) {
    if (rho <= rho_r)
        return v_r - (std::pow(rho_r, p.theta) - std::pow(rho, p.theta)) / p.theta;
    return v_r + std::sqrt((pressure(rho, p) - pressure(rho_r, p)) * (rho - rho_r) / (rho * rho_r));
}

// Root of a monotone decreasing f by Illinois false position with doubling
// expansion of the initial bracket.
template <class F>
double solve_decreasing(F f, double lo, double hi, double f_lo) {
    double f_hi = f(hi);
    int guard = 0;
    while (f_hi > 0.0 && guard++ < 200) {
        lo = hi;
        f_lo = f_hi;
        hi *= 2.0;
        f_hi = f(hi);
    }
    if (f_hi > 0.0) throw std::runtime_error("riemann: bracket expansion failed");
    if (f_lo <= 0.0) return lo;
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        double mid = (f_lo * hi - f_hi * lo) / (f_lo - f_hi);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f_mid = f(mid);
        if (f_mid > 0.0) {
            lo = mid;
            f_lo = f_mid;
            if (side == 1) f_hi *= 0.5;
            side = 1;
        } else {
            hi = mid;
            f_hi = f_mid;
            if (side == -1) f_lo *= 0.5;
            side = -1;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

Wave make_shock(WaveKind kind, double sigma, const GasState& l, const GasState& r) {
    return {kind, sigma, sigma, l, r};
}

void append_wall_marker(WaveFan& fan, const GasState& trace) {
    fan.waves.push_back({WaveKind::ContactWithWall, 0.0, 0.0, trace, trace});
}

}  // namespace

double wave_speed_S(double rho, double rho0, const ModelParams& p) {
    if (rho < 0.0 || rho0 < 0.0) throw std::domain_error("wave_speed_S: negative density");
    if (rho == rho0) return std::pow(rho0, p.theta);
    if (rho0 == 0.0) throw std::domain_error("wave_speed_S: vacuum-adjacent (rho0 = 0, rho > 0)");
    if (rho == 0.0) return 0.0;
    return std::sqrt(rho * (pressure(rho, p) - pressure(rho0, p)) / (rho0 * (rho - rho0)));
}

double hugoniot1_velocity(double rho, double rho_l, double v_l, const ModelParams& p) {
    if (rho == rho_l) return v_l;
    return v_l - (pressure(rho, p) - pressure(rho_l, p)) / (rho_l * wave_speed_S(rho, rho_l, p));
}

double hugoniot1_speed(double rho, double rho_l, double v_l, const ModelParams& p) {
    return v_l - wave_speed_S(rho, rho_l, p);
}

WaveFan solve_wall_right(const GasState& u_minus_in, const ModelParams& p) {
    const GasState u_minus = snap_vacuum(u_minus_in);
    WaveFan fan;
    fan.left_state = u_minus;

    if (u_minus.rho == 0.0) {
        fan.wall_case = WallCase::Vacuum;
        fan.right_state = {0.0, 0.0};
        append_wall_marker(fan, fan.right_state);
        return fan;
    }

    const double v = u_minus.m / u_minus.rho;
    const RiemannPair r = to_riemann(u_minus, p);

    if (v > 0.0) {
        // 1-shock to a compressed rest state.
        auto f = [&](double rho) { return hugoniot1_velocity(rho, u_minus.rho, v, p); };
        const double rho_plus = solve_decreasing(f, u_minus.rho, 2.0 * u_minus.rho, v);
        const GasState u_plus{rho_plus, 0.0};
        const double sigma = hugoniot1_speed(rho_plus, u_minus.rho, v, p);
        fan.wall_case = WallCase::Shock;
        fan.right_state = u_plus;
        fan.waves.push_back(make_shock(WaveKind::Shock1, sigma, u_minus, u_plus));
        append_wall_marker(fan, u_plus);
        return fan;
    }

    if (v == 0.0) {
        // Both the shock and the rarefaction construction degenerate here.
        fan.wall_case = WallCase::Rarefaction;
        fan.right_state = u_minus;
        append_wall_marker(fan, u_minus);
        return fan;
    }

    if (r.w > 0.0) {
        // 1-rarefaction to rest; w is constant along it.
        const double rho_plus = std::pow(p.theta * r.w, 1.0 / p.theta);
        const GasState u_plus{rho_plus, 0.0};
        fan.wall_case = WallCase::Rarefaction;
        fan.right_state = u_plus;
        fan.waves.push_back({WaveKind::Rarefaction1, v - std::pow(u_minus.rho, p.theta),
                             -std::pow(rho_plus, p.theta), u_minus, u_plus});
        append_wall_marker(fan, u_plus);
        return fan;
    }

    // w <= 0: rarefaction down to vacuum, then vacuum against the wall.
    fan.wall_case = WallCase::RarefactionVacuum;
    fan.right_state = {0.0, 0.0};
    fan.waves.push_back({WaveKind::Rarefaction1, v - std::pow(u_minus.rho, p.theta), r.w,
                         u_minus, GasState{0.0, 0.0}});
    if (r.w < 0.0)
        fan.waves.push_back({WaveKind::Vacuum, r.w, 0.0, GasState{0.0, 0.0}, GasState{0.0, 0.0}});
    append_wall_marker(fan, fan.right_state);
    return fan;
}

WaveFan solve_wall_left(const GasState& u_plus_in, const ModelParams& p) {
    const WaveFan mirror = solve_wall_right({u_plus_in.rho, -u_plus_in.m}, p);
    WaveFan fan;
    fan.wall_case = mirror.wall_case;
    fan.left_state = {mirror.right_state.rho, -mirror.right_state.m};
    fan.right_state = {mirror.left_state.rho, -mirror.left_state.m};
    for (auto it = mirror.waves.rbegin(); it != mirror.waves.rend(); ++it) {
        Wave w;
        switch (it->kind) {
            case WaveKind::Shock1: w.kind = WaveKind::Shock2; break;
            case WaveKind::Shock2: w.kind = WaveKind::Shock1; break;
            case WaveKind::Rarefaction1: w.kind = WaveKind::Rarefaction2; break;
            case WaveKind::Rarefaction2: w.kind = WaveKind::Rarefaction1; break;
            default: w.kind = it->kind; break;
        }
        w.speed_left = -it->speed_right;
        w.speed_right = -it->speed_left;
        w.left_state = {it->right_state.rho, -it->right_state.m};
        w.right_state = {it->left_state.rho, -it->left_state.m};
        fan.waves.push_back(w);
    }
    return fan;
}

WaveFan solve_interior(const GasState& ul_in, const GasState& ur_in, const ModelParams& p) {
    const GasState ul = snap_vacuum(ul_in);
    const GasState ur = snap_vacuum(ur_in);
    WaveFan fan;
    fan.left_state = ul;
    fan.right_state = ur;

    if (ul.rho == ur.rho && ul.m == ur.m) return fan;

    const RiemannPair rl = to_riemann(ul, p);
    const RiemannPair rr = to_riemann(ur, p);
    const double vl = ul.velocity();
    const double vr = ur.velocity();

    const bool vacuum_between = (ul.rho == 0.0) || (ur.rho == 0.0) || (rl.w <= rr.z);
    if (vacuum_between) {
        if (ul.rho > 0.0) {
            fan.waves.push_back({WaveKind::Rarefaction1, vl - std::pow(ul.rho, p.theta), rl.w,
                                 ul, GasState{0.0, 0.0}});
        }
        if (ul.rho > 0.0 && ur.rho > 0.0 && rr.z > rl.w) {
            fan.waves.push_back(
                {WaveKind::Vacuum, rl.w, rr.z, GasState{0.0, 0.0}, GasState{0.0, 0.0}});
        }
        if (ur.rho > 0.0) {
            fan.waves.push_back({WaveKind::Rarefaction2, rr.z, vr + std::pow(ur.rho, p.theta),
                                 GasState{0.0, 0.0}, ur});
        }
        return fan;
    }

    // Two-wave solution: intersect the 1-curve from ul with the 2-curve
    // from ur.  The difference is strictly decreasing in rho.
    auto f = [&](double rho) {
        return curve1_velocity(rho, ul.rho, vl, p) - curve2_velocity(rho, ur.rho, vr, p);
    };
    const double hi0 = 2.0 * std::max(ul.rho, ur.rho);
    const double rho_star = solve_decreasing(f, 0.0, hi0, rl.w - rr.z);
    const double v_star = 0.5 * (curve1_velocity(rho_star, ul.rho, vl, p) +
                                 curve2_velocity(rho_star, ur.rho, vr, p));
    const GasState u_star{rho_star, rho_star * v_star};

    const double tol = 1e-13 * std::max({1.0, ul.rho, ur.rho});
    if (rho_star > ul.rho + tol) {
        const double sigma = vl - wave_speed_S(rho_star, ul.rho, p);
        fan.waves.push_back(make_shock(WaveKind::Shock1, sigma, ul, u_star));
    } else if (rho_star < ul.rho - tol) {
        fan.waves.push_back({WaveKind::Rarefaction1, vl - std::pow(ul.rho, p.theta),
                             v_star - std::pow(rho_star, p.theta), ul, u_star});
    }
    if (rho_star > ur.rho + tol) {
        const double sigma = vr + wave_speed_S(rho_star, ur.rho, p);
        fan.waves.push_back(make_shock(WaveKind::Shock2, sigma, u_star, ur));
    } else if (rho_star < ur.rho - tol) {
        fan.waves.push_back({WaveKind::Rarefaction2, v_star + std::pow(rho_star, p.theta),
                             vr + std::pow(ur.rho, p.theta), u_star, ur});
    }
    return fan;
}

GasState sample(const WaveFan& fan, double xi, const ModelParams& p) {
    GasState current = fan.left_state;
    for (const Wave& w : fan.waves) {
        if (w.kind == WaveKind::ContactWithWall) continue;
        if (xi < w.speed_left) return current;
        if (xi <= w.speed_right) {
            switch (w.kind) {
                case WaveKind::Shock1:
                case WaveKind::Shock2:
                    return w.right_state;
                case WaveKind::Vacuum:
                    return {0.0, 0.0};
                case WaveKind::Rarefaction1: {
                    const double wl = to_riemann(w.left_state, p).w;
                    const double arg = std::max(p.theta * (wl - xi) / (1.0 + p.theta), 0.0);
                    const double rho = std::pow(arg, 1.0 / p.theta);
                    return {rho, rho * (xi + std::pow(rho, p.theta))};
                }
                case WaveKind::Rarefaction2: {
                    const double zr = to_riemann(w.right_state, p).z;
                    const double arg = std::max(p.theta * (xi - zr) / (1.0 + p.theta), 0.0);
                    const double rho = std::pow(arg, 1.0 / p.theta);
                    return {rho, rho * (xi - std::pow(rho, p.theta))};
                }
                default:
                    return current;
            }
        }
        current = w.right_state;
    }
    return fan.right_state;
}

double entropy_production(const GasState& l, const GasState& r, double sigma,
                          const ModelParams& p) {
    return sigma * (mechanical_energy(r, p) - mechanical_energy(l, p)) -
           (energy_flux(r, p) - energy_flux(l, p));
}

double rh_residual(const GasState& l, const GasState& r, double sigma, const ModelParams& p) {
    const double res1 = sigma * (r.rho - l.rho) - (r.m - l.m);
    auto f2 = [&](const GasState& u) {
        return (u.rho > 0.0 ? u.m * u.m / u.rho : 0.0) + pressure(u.rho, p);
    };
    const double res2 = sigma * (r.m - l.m) - (f2(r) - f2(l));
    return std::max(std::abs(res1), std::abs(res2));
}

}  // namespace euler1d
