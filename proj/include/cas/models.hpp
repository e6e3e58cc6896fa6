#pragma once

#include "cas/linalg.hpp"

#include <span>
#include <vector>

namespace cas::models {

using linalg::Matrix;
using linalg::PathConstruction;
using linalg::Vector;

// ---------------------------------------------------------------------------
// Black-Scholes Asian call

struct GbmSpec {
    double s0 = 100.0;
    double r = 0.05;      // risk-neutral rate / year
    double sigma = 0.2;   // volatility / sqrt(year)
    double t = 1.0;       // maturity, years
    int d = 32;           // time steps
    double k = 100.0;     // strike

    double dt() const { return t / d; }
};

// Undiscounted payoff (S_bar - K)_+ with S_j = s0*exp((r-sigma^2/2) j dt
// + sigma (R z)_j). Discounting happens at the estimator.
double asian_call(const GbmSpec& spec, const PathConstruction& r, std::span<const double> z);

// Average-price path value S_bar(R, z); used by root-finding and the Greeks.
double asian_mean_price(const GbmSpec& spec, const PathConstruction& r, std::span<const double> z);

// ---------------------------------------------------------------------------
// Stochastic volatility Asian call (Euler scheme on two correlated BMs)

enum class SvKind { HullWhite, Heston, SteinStein };

struct SvSpec {
    SvKind kind = SvKind::Heston;
    double r = 0.05;
    double s0 = 100.0;
    double k = 100.0;
    double v0 = 0.2;
    double rho = -0.5; // |rho| < 1
    double t = 1.0;
    int d = 32;
    // Hull-White: dV = nu V dt + xi V dW2 (simulated in log space)
    double nu = 0.0;
    double xi = 0.5;
    // Heston: dV = kappa(theta - V)dt + sigma_v sqrt(V) dW2
    // Stein-Stein as displayed: dV = kappa(theta - V)dt + sigma_v V dW2
    double kappa = 1.0;
    double theta = 0.2;
    double sigma_v = 0.05;

    double dt() const { return t / d; }
    // Recorded, not enforced; only meaningful for Heston.
    bool feller_ok() const { return 2.0 * kappa * theta >= sigma_v * sigma_v; }
};

// sqrt(max(V_{k-1}, 0)) for steps k = 1..d, driven by the x2 block of the
// rotated input. Full truncation: the drift keeps the raw V.
Vector sv_sqrt_v(const SvSpec& spec, const double* x2);

// Payoff at x = U z; pass an empty matrix for the identity rotation.
double sv_asian(const SvSpec& spec, const Matrix& u, std::span<const double> z);

// Payoff directly from the rotated coordinates (x1 block, x2 block).
double sv_asian_from_x(const SvSpec& spec, const double* x1, const double* x2);

// ---------------------------------------------------------------------------
// Basket / spread option on L correlated assets

struct BasketSpec {
    int l = 2;
    Vector weights{1.0, -1.0}; // signed
    Vector s0{100.0, 100.0};
    Vector sigma{0.2, 0.2};
    Matrix corr;        // L-by-L, unit diagonal, PSD
    double r = 0.05;
    double t = 1.0;
    int d = 32;
    double k = 0.0;

    double dt() const { return t / d; }
    int dim() const { return d * l; }
};

// Covariance Lambda of the stacked scaled Brownian motions; (k,l) block is
// rho_{k,l} sigma_k sigma_l Sigma.
Matrix basket_covariance(const BasketSpec& spec);

// Square root of Lambda built from a d-by-d construction of one Brownian
// motion (standard or PCA) and an upper-triangular factor of the asset
// correlation, so the first coordinate block drives only the first asset.
PathConstruction two_bm_construction(const BasketSpec& spec, linalg::ConstructionKind kind);

// Signed weighted average price sum_l w_l S_bar^{(l)}(z) with B-tilde = R z.
double basket_mean_price(const BasketSpec& spec, const PathConstruction& r,
                         std::span<const double> z);

// Undiscounted payoff (basket_mean_price - K)_+.
double basket_payoff(const BasketSpec& spec, const PathConstruction& r,
                     std::span<const double> z);

// ---------------------------------------------------------------------------
// Chemical Langevin equation

struct CleSpec {
    int n_species = 2;
    int n_reactions = 2;
    Matrix nu;             // N-by-J stoichiometry
    Matrix reactant_order; // N-by-J mass-action orders
    Vector rates;          // c_j
    Vector x0;
    double tau = 0.2;
    int d = 8;
    double k = 100.0; // threshold on X_{d,1}

    int dim() const { return d * n_reactions; }
};

// Reversible isomerization preset exactly as displayed: nu_1 = (1,-1),
// nu_2 = (-1,1), a_1 = c1 X1, a_2 = c2 X2.
CleSpec cle_isomerization(double c1 = 1.0, double c2 = 1e-4, double x01 = 1e2, double x02 = 1e6,
                          double t = 1.6, double tau = 0.2, double k = 100.0);

Vector cle_propensities(const CleSpec& spec, const Vector& x);

struct CleResult {
    Vector final_state;
    Matrix history; // (d+1)-by-N, row k = X_k
};

// One Euler-Maruyama step: x + tau sum_j nu_j a_j(x) + sum_j nu_j
// sqrt(max(a_j,0) tau) z_j.
Vector cle_step(const CleSpec& spec, const Vector& x, std::span<const double> z_step);

// Euler-Maruyama with step-major noise layout z[(k-1)J + j]; propensities
// are clamped at zero inside the square roots only.
CleResult cle_trajectory(const CleSpec& spec, std::span<const double> z);

double cle_indicator(const CleSpec& spec, std::span<const double> z);
double cle_smoothed(const CleSpec& spec, std::span<const double> z);

// ---------------------------------------------------------------------------
// Sum of correlated log-normals

struct LognormalSumSpec {
    int d = 10;
    Vector mu;    // defaults to zeros
    Matrix sigma; // PSD covariance

    static LognormalSumSpec autocorrelated(int d, double rho);
};

// h(y) = sum_j exp(mu_j + (R y)_j); increasing in y_1 when R_{.,1} >= 0.
double lognormal_sum(const LognormalSumSpec& spec, const PathConstruction& r,
                     std::span<const double> y);

} // namespace cas::models
