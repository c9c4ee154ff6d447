#include "euler1d/corrected.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace euler1d {

namespace {

constexpr double kGaussX5[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                0.5384693101056831, 0.9061798459386640};
constexpr double kGaussW5[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                0.4786286704993665, 0.2369268850561891};

double similarity(double x, double x_c, double tau) {
    if (tau <= 0.0) return (x < x_c) ? -1e300 : (x > x_c ? 1e300 : 0.0);
    return (x - x_c) / tau;
}

// Antiderivative pieces for rarefaction interiors: rho = (A u)^{1/theta}
// with u the distance to the constant invariant.
struct RarefIntegrals {
    double g1;  // integral of rho du
    double g2;  // integral of u rho du
};

RarefIntegrals raref_anti(double u, double A, double inv_theta) {
    RarefIntegrals r;
    const double p1 = inv_theta + 1.0;
    const double p2 = inv_theta + 2.0;
    const double au = std::max(A * u, 0.0);
    const double base = std::pow(au, inv_theta);
    r.g1 = base * u / p1;
    r.g2 = base * u * u / p2;
    return r;
}

}  // namespace

double StripPiece::max_front_speed() const {
    double s = 0.0;
    for (const Front& f : fronts) s = std::max(s, std::abs(f.sigma));
    auto fan_speed = [&s](const WaveFan& fan) {
        for (const Wave& w : fan.waves) {
            if (w.kind == WaveKind::ContactWithWall) continue;
            s = std::max({s, std::abs(w.speed_left), std::abs(w.speed_right)});
        }
    };
    if (head_fan) fan_speed(*head_fan);
    if (tail_fan) fan_speed(*tail_fan);
    return s;
}

GasState transport_state(const StripPiece& piece, double x, double t, const ModelParams& p) {
    const double tau = t - piece.t_n;
    const int n = static_cast<int>(piece.regions.size());
    int r = 0;
    while (r < n - 1 && x >= piece.front_x(r, t)) ++r;
    const Region& reg = piece.regions[r];
    if (reg.mode == AnchorMode::PlainHead)
        return sample(*piece.head_fan, similarity(x, piece.x_c, tau), p);
    if (reg.mode == AnchorMode::PlainTail)
        return sample(*piece.tail_fan, similarity(x, piece.x_c, tau), p);
    return reg.base;
}

ConservedIntegral fan_integrate(const WaveFan& fan, double x_anchor, double tau, double a,
                                double b, const ModelParams& p) {
    ConservedIntegral out;
    if (b <= a) return out;
    if (tau <= 0.0) {
        // Degenerate strip: constant states either side of the anchor.
        const double la = std::min(b, std::max(a, x_anchor));
        out.mass = fan.left_state.rho * (la - a) + fan.right_state.rho * (b - la);
        out.momentum = fan.left_state.m * (la - a) + fan.right_state.m * (b - la);
        return out;
    }

    const double inv_theta = 1.0 / p.theta;
    const double A = p.theta / (1.0 + p.theta);

    double xi_lo = (a - x_anchor) / tau;
    const double xi_hi = (b - x_anchor) / tau;
    GasState current = fan.left_state;

    auto add_const = (+[](ConservedIntegral& acc, const GasState& u, double w) {
        acc.mass += u.rho * w;
        acc.momentum += u.m * w;
    });

    for (const Wave& w : fan.waves) {
        if (w.kind == WaveKind::ContactWithWall) continue;
        if (xi_lo >= xi_hi) break;
        if (xi_lo < w.speed_left) {
            const double up = std::min(w.speed_left, xi_hi);
            add_const(out, current, (up - xi_lo) * tau);
            xi_lo = up;
        }
        if (xi_lo >= xi_hi) break;
        if (xi_lo < w.speed_right) {
            const double up = std::min(w.speed_right, xi_hi);
            switch (w.kind) {
                case WaveKind::Rarefaction1: {
                    const double wl = to_riemann(w.left_state, p).w;
                    // rho = (A (wl - xi))^{1/theta}, v = (1-A) xi + A wl.
                    const RarefIntegrals ia = raref_anti(wl - xi_lo, A, inv_theta);
                    const RarefIntegrals ib = raref_anti(wl - up, A, inv_theta);
                    const double int_rho = ia.g1 - ib.g1;
                    const double int_u_rho = ia.g2 - ib.g2;  // integral of (wl - xi) rho
                    const double int_xi_rho = wl * int_rho - int_u_rho;
                    out.mass += tau * int_rho;
                    out.momentum += tau * ((1.0 - A) * int_xi_rho + A * wl * int_rho);
                    break;
                }
                case WaveKind::Rarefaction2: {
                    const double zr = to_riemann(w.right_state, p).z;
                    // rho = (A (xi - zr))^{1/theta}, v = (1-A) xi + A zr.
                    const RarefIntegrals ia = raref_anti(xi_lo - zr, A, inv_theta);
                    const RarefIntegrals ib = raref_anti(up - zr, A, inv_theta);
                    const double int_rho = ib.g1 - ia.g1;
                    const double int_u_rho = ib.g2 - ia.g2;  // integral of (xi - zr) rho
                    const double int_xi_rho = zr * int_rho + int_u_rho;
                    out.mass += tau * int_rho;
                    out.momentum += tau * ((1.0 - A) * int_xi_rho + A * zr * int_rho);
                    break;
                }
                case WaveKind::Vacuum:
                    break;  // nothing to add
                default:
                    // Shocks have zero width; nothing between speed_left/right.
                    break;
            }
            xi_lo = up;
        }
        current = w.right_state;
    }
    if (xi_lo < xi_hi) add_const(out, fan.right_state, (xi_hi - xi_lo) * tau);
    return out;
}

ConservedIntegral transport_integrate(const StripPiece& piece, double a, double b, double t,
                                      const ModelParams& p) {
    ConservedIntegral out;
    if (b <= a) return out;
    const double tau = t - piece.t_n;
    const int n = static_cast<int>(piece.regions.size());

    double x = a;
    for (int r = 0; r < n && x < b; ++r) {
        const double right = (r < n - 1) ? std::max(piece.front_x(r, t), x) : b;
        const double up = std::min(right, b);
        if (up <= x) continue;
        const Region& reg = piece.regions[r];
        if (reg.mode == AnchorMode::PlainHead) {
            const ConservedIntegral c = fan_integrate(*piece.head_fan, piece.x_c, tau, x, up, p);
            out.mass += c.mass;
            out.momentum += c.momentum;
        } else if (reg.mode == AnchorMode::PlainTail) {
            const ConservedIntegral c = fan_integrate(*piece.tail_fan, piece.x_c, tau, x, up, p);
            out.mass += c.mass;
            out.momentum += c.momentum;
        } else {
            out.mass += reg.base.rho * (up - x);
            out.momentum += reg.base.m * (up - x);
        }
        x = up;
    }
    return out;
}

void drift_coefficients(const GasState& u, double v_anchor, const ModelParams& p, double& c1,
                        double& c2) {
    const SourcePair g = source_g1_g2(u, p);
    c1 = g.g1 + p.delta - v_anchor;
    c2 = g.g2 - p.delta - v_anchor;
}

PieceEvaluator::PieceEvaluator(const StripPiece& piece, const ModelParams& p)
    : piece_(&piece), params_(&p) {
    i_ref_.assign(piece.regions.size(), std::numeric_limits<double>::quiet_NaN());
}

int PieceEvaluator::region_of(double x, double t) const {
    const int n = static_cast<int>(piece_->regions.size());
    int r = 0;
    while (r < n - 1 && x >= piece_->front_x(r, t)) ++r;
    return r;
}

RiemannPair PieceEvaluator::stage1(const Region& reg, double y, double tau, double xl,
                                   double P) const {
    const double common = P + reg.zeta_base * (y - xl) + reg.prod_allow * tau;
    return {reg.inv.z + common + reg.c1 * tau, reg.inv.w + common + reg.c2 * tau};
}

GasState PieceEvaluator::eval_region(int r, double x, const Slice& s) {
    const Region& reg = piece_->regions[r];
    const ModelParams& p = *params_;
    const double tau_plain = s.t - piece_->t_n;

    switch (reg.mode) {
        case AnchorMode::PlainConst:
            return reg.base;
        case AnchorMode::PlainHead:
            return sample(*piece_->head_fan, similarity(x, piece_->x_c, tau_plain), p);
        case AnchorMode::PlainTail:
            return sample(*piece_->tail_fan, similarity(x, piece_->x_c, tau_plain), p);
        default:
            break;
    }

    double xl = 0.0;
    double P = 0.0;
    switch (reg.mode) {
        case AnchorMode::FixedLeft:
        case AnchorMode::FixedCenter:
        case AnchorMode::FixedRight:
            xl = reg.anchor_x;
            break;
        case AnchorMode::FanHalfLeft:
            xl = (r > 0) ? s.front_x[r - 1] : piece_->x_left;
            if (!std::isnan(i_ref_[r])) P = (r > 0 ? s.chained[r - 1] : 0.0) - i_ref_[r];
            break;
        case AnchorMode::FanHalfRight:
            xl = s.front_x[r];
            if (!std::isnan(i_ref_[r])) P = s.chained[r] - i_ref_[r];
            break;
        default:
            break;
    }
    const double tau = s.t - reg.t_ref;

    // Stage 2: zeta integrated along the stage-1 state, drift re-evaluated
    // at the stage-1 state.
    static constexpr double kG3X[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double kG3W[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double q = 0.0;
    const double half = 0.5 * (x - xl);
    const double mid = 0.5 * (x + xl);
    for (int k = 0; k < 3; ++k) {
        const double y = mid + half * kG3X[k];
        RiemannPair r1 = stage1(reg, y, tau, xl, P);
        if (r1.w < r1.z) {
            ++vacuum_snaps_;
            r1 = {0.0, 0.0};
        }
        q += kG3W[k] * zeta(from_riemann(r1, p), p);
    }
    q *= half;

    RiemannPair rx = stage1(reg, x, tau, xl, P);
    if (rx.w < rx.z) {
        ++vacuum_snaps_;
        rx = {0.0, 0.0};
    }
    double c1 = 0.0, c2 = 0.0;
    drift_coefficients(from_riemann(rx, p), reg.v_anchor, p, c1, c2);

    const double common = P + q + reg.prod_allow * tau;
    RiemannPair r2{reg.inv.z + common + c1 * tau, reg.inv.w + common + c2 * tau};
    if (r2.w < r2.z) {
        ++vacuum_snaps_;
        r2 = {0.0, 0.0};
    }
    return from_riemann(r2, p);
}

double PieceEvaluator::region_zeta_integral(int r, double a, double b, const Slice& s) {
    if (b <= a) return 0.0;
    const Region& reg = piece_->regions[r];
    const ModelParams& p = *params_;
    if (reg.mode == AnchorMode::PlainConst) return zeta(reg.base, p) * (b - a);

    static constexpr double kG3X[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double kG3W[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double acc = 0.0;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int k = 0; k < 3; ++k) {
        const double y = mid + half * kG3X[k];
        acc += kG3W[k] * zeta(eval_region(r, y, s), p);
    }
    return acc * half;
}

const PieceEvaluator::Slice& PieceEvaluator::slice(double t) {
    ensure_refs();
    auto it = slices_.find(t);
    if (it != slices_.end()) return it->second;

    Slice s;
    s.t = t;
    const int nf = static_cast<int>(piece_->fronts.size());
    s.front_x.resize(nf);
    for (int i = 0; i < nf; ++i) s.front_x[i] = piece_->front_x(i, t);
    s.chained.assign(nf, 0.0);
    bool any_fan = false;
    for (const Region& r : piece_->regions)
        if (r.mode == AnchorMode::FanHalfLeft || r.mode == AnchorMode::FanHalfRight)
            any_fan = true;
    if (any_fan) {
        double left = piece_->x_left;
        double acc = 0.0;
        for (int i = 0; i < nf; ++i) {
            acc += region_zeta_integral(i, left, s.front_x[i], s);
            s.chained[i] = acc;
            left = s.front_x[i];
        }
    }
    if (slices_.size() > 8) slices_.clear();
    return slices_.emplace(t, std::move(s)).first->second;
}

void PieceEvaluator::ensure_refs() {
    if (refs_ready_) return;
    refs_ready_ = true;

    bool any_fan = false;
    for (const Region& r : piece_->regions)
        if (r.mode == AnchorMode::FanHalfLeft || r.mode == AnchorMode::FanHalfRight)
            any_fan = true;
    if (!any_fan) return;

    // Build the half-time slice; fan references are the chained integrals at
    // each region's anchoring front (P vanishes there by construction).
    Slice s;
    s.t = piece_->t_half();
    const int nf = static_cast<int>(piece_->fronts.size());
    s.front_x.resize(nf);
    for (int i = 0; i < nf; ++i) s.front_x[i] = piece_->front_x(i, s.t);
    s.chained.resize(nf);
    double left = piece_->x_left;
    double acc = 0.0;
    for (int i = 0; i < nf; ++i) {
        const Region& reg = piece_->regions[i];
        if (reg.mode == AnchorMode::FanHalfLeft && i > 0) i_ref_[i] = s.chained[i - 1];
        acc += region_zeta_integral(i, left, s.front_x[i], s);
        s.chained[i] = acc;
        if (reg.mode == AnchorMode::FanHalfRight) i_ref_[i] = s.chained[i];
        left = s.front_x[i];
    }
    const int last = static_cast<int>(piece_->regions.size()) - 1;
    if (last >= 0) {
        const Region& reg = piece_->regions[last];
        if (reg.mode == AnchorMode::FanHalfLeft && last > 0) i_ref_[last] = s.chained[last - 1];
    }
    if (nf > 0 && piece_->regions[0].mode == AnchorMode::FanHalfLeft) i_ref_[0] = 0.0;
    slices_.emplace(s.t, std::move(s));
}

GasState PieceEvaluator::corrected_state(double x, double t) {
    if (piece_->fronts.empty()) {
        Slice s;
        s.t = t;
        return eval_region(0, x, s);
    }
    const Slice& s = slice(t);
    return eval_region(region_of(x, t), x, s);
}

GasState PieceEvaluator::corrected_state_stage1(double x, double t) {
    const ModelParams& p = *params_;
    int r;
    double P = 0.0;
    double xl = 0.0;
    if (piece_->fronts.empty()) {
        r = 0;
    } else {
        const Slice& s = slice(t);
        r = region_of(x, t);
        const Region& rr = piece_->regions[r];
        if (rr.mode == AnchorMode::FanHalfLeft && !std::isnan(i_ref_[r]))
            P = (r > 0 ? s.chained[r - 1] : 0.0) - i_ref_[r];
        if (rr.mode == AnchorMode::FanHalfRight && !std::isnan(i_ref_[r]))
            P = s.chained[r] - i_ref_[r];
    }
    const Region& reg = piece_->regions[r];
    switch (reg.mode) {
        case AnchorMode::PlainConst:
            return reg.base;
        case AnchorMode::PlainHead:
            return sample(*piece_->head_fan, (x - piece_->x_c) / std::max(t - piece_->t_n, 1e-300),
                          p);
        case AnchorMode::PlainTail:
            return sample(*piece_->tail_fan, (x - piece_->x_c) / std::max(t - piece_->t_n, 1e-300),
                          p);
        case AnchorMode::FanHalfLeft:
            xl = (r > 0) ? piece_->front_x(r - 1, t) : piece_->x_left;
            break;
        case AnchorMode::FanHalfRight:
            xl = piece_->front_x(r, t);
            break;
        default:
            xl = reg.anchor_x;
            break;
    }
    RiemannPair r1 = stage1(reg, x, t - reg.t_ref, xl, P);
    if (r1.w < r1.z) r1 = {0.0, 0.0};
    return from_riemann(r1, p);
}

double PieceEvaluator::corrected_integral(int f, double a, double b, double t) {
    if (b <= a) return 0.0;
    if (piece_->fronts.empty()) {
        Slice s;
        s.t = t;
        const ModelParams& p = *params_;
        auto apply0 = [&](const GasState& u) {
            switch (f) {
                case 0: return zeta(u, p);
                case 1: return mechanical_energy(u, p);
                case 2: return u.rho;
                default: return u.m;
            }
        };
        double acc = 0.0;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (int k = 0; k < 5; ++k)
            acc += kGaussW5[k] * apply0(eval_region(0, mid + half * kGaussX5[k], s));
        return acc * half;
    }
    const Slice& s = slice(t);
    const ModelParams& p = *params_;
    const int n = static_cast<int>(piece_->regions.size());

    auto apply = [&](const GasState& u) {
        switch (f) {
            case 0: return zeta(u, p);
            case 1: return mechanical_energy(u, p);
            case 2: return u.rho;
            default: return u.m;
        }
    };

    double acc = 0.0;
    double x = a;
    for (int r = 0; r < n && x < b; ++r) {
        const double right = (r < n - 1) ? std::max(s.front_x[r], x) : b;
        const double up = std::min(right, b);
        if (up <= x) continue;
        const double half = 0.5 * (up - x);
        const double mid = 0.5 * (up + x);
        double part = 0.0;
        for (int k = 0; k < 5; ++k)
            part += kGaussW5[k] * apply(eval_region(r, mid + half * kGaussX5[k], s));
        acc += part * half;
        x = up;
    }
    return acc;
}

}  // namespace euler1d
