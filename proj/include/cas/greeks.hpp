#pragma once

#include "cas/models.hpp"
#include "cas/preint.hpp"
#include "cas/subspace.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace cas::greeks {

using linalg::Matrix;
using linalg::PathConstruction;
using linalg::Vector;

enum class GreekKind { Delta, Gamma, Rho, Theta, Vega };

std::string to_string(GreekKind kind);

// Discounted pathwise estimate for the Asian call under Black-Scholes.
// Every kind has the form g(z) * 1{S_bar >= K} with smooth g; theta is the
// negative maturity derivative (market convention).
double greek_pathwise(const models::GbmSpec& spec, GreekKind kind, const PathConstruction& r,
                      std::span<const double> z);

// Separation-of-variables transform: maps z1 through
// T(z1) = Phi^-1(Phi(alpha) + PhiBar(alpha) Phi(z1)) with alpha the root of
// S_bar = K, weighting by PhiBar(alpha). Continuous in z1 with the same
// expectation as the raw integrand. Requires R_{.,1} >= 0.
class SovTransform {
  public:
    SovTransform(models::GbmSpec spec, GreekKind kind, PathConstruction r);

    double operator()(std::span<const double> z) const;

    // The transformed first coordinate; exposed for its range contract.
    double warp(double z1, std::span<const double> z_tail) const;

  private:
    models::GbmSpec spec_;
    GreekKind kind_;
    PathConstruction r_;
    preint::AsianGbmPreint threshold_;
};

// Closed-form conditional expectation of the pathwise Greek over z1,
// assembled from the truncated-exponential moment identities below.
class GreekPreint {
  public:
    GreekPreint(models::GbmSpec spec, GreekKind kind, PathConstruction r);

    double operator()(std::span<const double> z_tail) const;

  private:
    models::GbmSpec spec_;
    GreekKind kind_;
    PathConstruction r_;
    Vector c_;     // sigma R_{j1}
    Vector drift_; // (r - sigma^2/2) t_j
};

// int_gamma^inf e^{cz} phi(z) dz and int_gamma^inf z e^{cz} phi(z) dz.
double tail_exp_moment0(double c, double gamma);
double tail_exp_moment1(double c, double gamma);

struct GreekRotation {
    subspace::Rotation rotation;
    PathConstruction construction; // R_std * U (or the fallback rebuild)
    bool fell_back = false;        // first AS column was sign-mixed
};

// Unconstrained active subspace of the SOV-smoothed integrand, starting from
// the standard construction.
GreekRotation greek_as_rotation(const models::GbmSpec& spec, GreekKind kind, int m, double eps,
                                std::uint64_t seed);

// Pre-integration-feasible rotation: same as above, but when R_{.,1} has
// mixed signs the first direction is replaced (gamma -> e1 so z1 stays the
// first standard-construction variable; others -> the PCA first column) and
// the remaining columns are recomputed by the constrained active subspace.
GreekRotation greek_rotation(const models::GbmSpec& spec, GreekKind kind, int m, double eps,
                             std::uint64_t seed);

} // namespace cas::greeks
