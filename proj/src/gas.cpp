#include "euler1d/gas.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace euler1d {

double pressure(double rho, const ModelParams& p) {
    if (rho < 0.0) throw std::domain_error("pressure: negative density");
    if (rho == 0.0) return 0.0;
    return std::pow(rho, p.gamma) / p.gamma;
}

double sound_speed(double rho, const ModelParams& p) {
    if (rho <= 0.0) return 0.0;
    return std::pow(rho, p.theta);
}

RiemannPair to_riemann(const GasState& u, const ModelParams& p) {
    if (u.rho < 0.0) throw std::domain_error("to_riemann: negative density");
    if (u.rho == 0.0) return {0.0, 0.0};
    const double v = u.m / u.rho;
    const double c = std::pow(u.rho, p.theta) / p.theta;
    return {v - c, v + c};
}

GasState from_riemann(const RiemannPair& r, const ModelParams& p) {
    if (r.w < r.z) throw std::domain_error("from_riemann: w < z is nonphysical");
    if (r.w == r.z) return {0.0, 0.0};
    const double rho = std::pow(p.theta * (r.w - r.z) / 2.0, 1.0 / p.theta);
    const double v = (r.w + r.z) / 2.0;
    return {rho, rho * v};
}

double mechanical_energy(const GasState& u, const ModelParams& p) {
    if (u.rho <= 0.0) return 0.0;
    return 0.5 * u.m * u.m / u.rho +
           std::pow(u.rho, p.gamma) / (p.gamma * (p.gamma - 1.0));
}

double energy_flux(const GasState& u, const ModelParams& p) {
    if (u.rho <= 0.0) return 0.0;
    return u.m * (0.5 * u.m * u.m / (u.rho * u.rho) +
                  std::pow(u.rho, p.gamma - 1.0) / (p.gamma - 1.0));
}

double zeta(const GasState& u, const ModelParams& p) {
    return mechanical_energy(u, p) - p.nu * u.rho + p.K;
}

double flux_correction_V(const GasState& u, const ModelParams& p) {
    return energy_flux(u, p) - p.nu * u.m;
}

CharSpeeds char_speeds(const GasState& u, const ModelParams& p) {
    if (u.rho <= 0.0) {
        const double v = u.velocity();
        return {v, v};
    }
    const double v = u.m / u.rho;
    const double c = std::pow(u.rho, p.theta);
    return {v - c, v + c};
}

SourcePair source_g1_g2(const GasState& u, const ModelParams& p) {
    const auto lam = char_speeds(u, p);
    if (u.rho <= 0.0) {
        return {-p.K * lam.lambda1 - p.delta, -p.K * lam.lambda2 + p.delta};
    }
    const double v = u.m / u.rho;
    const double rg = std::pow(u.rho, p.gamma);
    const double rgt = std::pow(u.rho, p.gamma + p.theta);
    const double rt1 = std::pow(u.rho, p.theta + 1.0);
    const double gg1 = p.gamma * (p.gamma - 1.0);
    const double g1 = -p.K * lam.lambda1 + rgt / gg1 + rg * v / p.gamma +
                      0.5 * rt1 * v * v - p.nu * rt1 - p.delta;
    const double g2 = -p.K * lam.lambda2 - rgt / gg1 + rg * v / p.gamma -
                      0.5 * rt1 * v * v + p.nu * rt1 + p.delta;
    return {g1, g2};
}

std::array<double, 4> hessian_mechanical_energy(const GasState& u, const ModelParams& p) {
    if (u.rho <= 0.0) throw std::domain_error("hessian_mechanical_energy: vacuum state");
    const double r = u.rho;
    const double h_rr = u.m * u.m / (r * r * r) + std::pow(r, p.gamma - 2.0);
    const double h_rm = -u.m / (r * r);
    return {h_rr, h_rm, h_rm, 1.0 / r};
}

ModelParams derive_params(const InitSampler& u0, double gamma, double epsilon,
                          std::optional<double> mu, int n_grid) {
    if (!(gamma > 1.0 && gamma <= 5.0 / 3.0))
        throw std::domain_error("derive_params: gamma outside (1, 5/3]");
    if (epsilon <= 0.0) throw std::domain_error("derive_params: epsilon must be positive");
    if (n_grid < 2) throw std::domain_error("derive_params: sampling grid too small");

    ModelParams p;
    p.gamma = gamma;
    p.theta = (gamma - 1.0) / 2.0;
    p.epsilon = epsilon;
    p.epsilon_prime = 1.0;

    // Midpoint sampling of the initial data.
    const double h = 1.0 / n_grid;
    std::vector<GasState> samples(n_grid);
    double rho_bar = 0.0;
    double eta0 = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const GasState u = u0((i + 0.5) * h);
        if (u.rho < 0.0) throw std::domain_error("derive_params: negative initial density");
        samples[i] = u;
        rho_bar += u.rho * h;
        eta0 += mechanical_energy(u, p) * h;
    }
    if (rho_bar <= 0.0) throw std::domain_error("derive_params: mean initial density must be positive");

    p.mu = mu.value_or(0.01 * eta0);
    if (p.mu <= 0.0) throw std::domain_error("derive_params: mu must be positive");
    p.rho_bar = rho_bar;
    p.eta_bar = eta0 + p.mu;
    p.nu = (3.0 * gamma - 1.0) / (gamma + 1.0) * p.eta_bar / p.rho_bar;
    p.K = p.rho_bar * p.nu - p.eta_bar;

    const double e1 = (gamma + 1.0) / (2.0 * (gamma - 1.0));
    const double e2 = (3.0 * gamma - 1.0) / (2.0 * (gamma - 1.0));
    p.M_infinity = 4.0 / (3.0 * gamma - 1.0) *
                       std::pow(2.0 * gamma * gamma * (gamma - 1.0) / (3.0 * gamma - 1.0), e1) *
                       std::pow(p.nu, e2) / (p.rho_bar * p.nu - p.eta_bar) +
                   2.0 * (p.nu * p.rho_bar + p.eta_bar + p.K) / (gamma - 1.0);
    p.delta = p.theta * p.K * epsilon / 2.0;

    // Smallest envelope constant bracketing both shifted invariants of the
    // initial data; the zeta-integral is accumulated by midpoint quadrature.
    double M0 = 0.0;
    double zeta_int = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        const double zmid = zeta_int + 0.5 * h * zeta(samples[i], p);
        const RiemannPair r = to_riemann(samples[i], p);
        M0 = std::max(M0, r.w - zmid);
        M0 = std::max(M0, zmid - r.z);
        zeta_int += h * zeta(samples[i], p);
    }
    p.M0 = M0;
    p.t0 = std::max((p.M0 - p.M_infinity - epsilon) / p.delta, 0.0);
    return p;
}

}  // namespace euler1d
