// State algebra for 1D isentropic gas dynamics on [0,1] with reflecting walls:
// conserved states, Riemann invariants, the mechanical-energy entropy pair,
// characteristic speeds, source weights and derivation of all model constants
// from initial data.
#pragma once

#include <array>
#include <functional>
#include <optional>

namespace euler1d {

// Conserved pair (rho, m).  Vacuum is rho == 0 with m == 0; velocity is
// defined as 0 there so every closed-form quantity extends continuously.
struct GasState {
    double rho = 0.0;
    double m = 0.0;

    double velocity() const { return rho > 0.0 ? m / rho : 0.0; }
};

// Riemann invariants (z, w), both in velocity units.  w >= z for physical
// states, with equality exactly at vacuum.
struct RiemannPair {
    double z = 0.0;
    double w = 0.0;
};

// Model constants measured once from the initial data.  Immutable after
// construction; safe to share across threads.
struct ModelParams {
    double gamma = 5.0 / 3.0;  // adiabatic exponent, in (1, 5/3]
    double theta = 1.0 / 3.0;  // (gamma-1)/2
    double epsilon = 0.1;      // attractor slack
    double epsilon_prime = 1.0;
    double mu = 0.0;           // energy margin
    double rho_bar = 0.0;      // mean initial density
    double eta_bar = 0.0;      // initial mechanical energy + mu
    double nu = 0.0;
    double K = 0.0;
    double M_infinity = 0.0;
    double delta = 0.0;        // theta*K*epsilon/2
    double M0 = 0.0;           // initial envelope constant
    double t0 = 0.0;           // predicted envelope entry time
};

using InitSampler = std::function<GasState(double)>;

double pressure(double rho, const ModelParams& p);

// c = rho^theta; coincides with sqrt(p'(rho)).
double sound_speed(double rho, const ModelParams& p);

RiemannPair to_riemann(const GasState& u, const ModelParams& p);
GasState from_riemann(const RiemannPair& r, const ModelParams& p);

// eta_*(u) = m^2/(2 rho) + rho^gamma/(gamma(gamma-1)); 0 at vacuum.
double mechanical_energy(const GasState& u, const ModelParams& p);

// q_*(u) = m (m^2/(2 rho^2) + rho^{gamma-1}/(gamma-1)); 0 at vacuum.
double energy_flux(const GasState& u, const ModelParams& p);

// zeta(u) = eta_*(u) - nu rho + K.
double zeta(const GasState& u, const ModelParams& p);

// V(u) = q_*(u) - nu m.
double flux_correction_V(const GasState& u, const ModelParams& p);

struct CharSpeeds {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

CharSpeeds char_speeds(const GasState& u, const ModelParams& p);

struct SourcePair {
    double g1 = 0.0;
    double g2 = 0.0;
};

// Source weights driving the shifted invariants.
SourcePair source_g1_g2(const GasState& u, const ModelParams& p);

// Hessian of eta_* in conserved variables, row-major [d2/drho2, d2/drhodm;
// d2/dmdrho, d2/dm2].  Requires rho > 0.
std::array<double, 4> hessian_mechanical_energy(const GasState& u, const ModelParams& p);

// Measures rho_bar, eta_bar, nu, K, M_infinity, delta, M0 and t0 from the
// initial data on a uniform sampling grid (midpoint quadrature for the
// integrals, discrete maximisation for M0).  mu defaults to 1% of the initial
// mechanical energy when not given.
ModelParams derive_params(const InitSampler& u0, double gamma, double epsilon,
                          std::optional<double> mu = std::nullopt, int n_grid = 10000);

}  // namespace euler1d
