#pragma once

#include "cas/models.hpp"
#include "cas/rootfind.hpp"
#include "cas/subspace.hpp"

#include <span>
#include <vector>

namespace cas::preint {

using linalg::Matrix;
using linalg::PathConstruction;
using linalg::Vector;

// Each context validates its monotonicity sign condition once, caches the
// coefficients that do not depend on the pre-integrated variable, and then
// evaluates the closed-form conditional expectation at conditioning points.

// E[(S_bar - K)_+ | z_{2:d}] for the Black-Scholes Asian call:
// sum_j w_j(z) e^{c_j^2/2} PhiBar(gamma - c_j) - K PhiBar(gamma), c_j = sigma R_{j1}.
class AsianGbmPreint {
  public:
    AsianGbmPreint(models::GbmSpec spec, PathConstruction r);

    double operator()(std::span<const double> z_tail) const; // size d-1

    // Threshold gamma(z_tail); exposed for the Greeks and their transform.
    RootResult threshold(std::span<const double> z_tail) const;

  private:
    models::GbmSpec spec_;
    PathConstruction r_;
    Vector c_;     // sigma * R_{j1} >= 0
    Vector drift_; // (r - sigma^2/2) t_j
};

// Stochastic-volatility conditional expectation of §-style form
// (1/d) sum_j zeta_j e^{c_j^2/2} PhiBar(gamma - c_j) - K PhiBar(gamma),
// where the rotation's first column vanishes on the volatility block.
class SvPreint {
  public:
    SvPreint(models::SvSpec spec, subspace::Rotation rot);

    double operator()(std::span<const double> z_tail) const; // size 2d-1

  private:
    models::SvSpec spec_;
    Matrix u_;
    Vector u1_head_; // first d entries of the first column, clamped >= 0
};

// Basket/spread conditional expectation with the signed-cone condition
// w_{ceil(j/d)} R_{j1} >= 0.
class BasketPreint {
  public:
    BasketPreint(models::BasketSpec spec, PathConstruction r);

    double operator()(std::span<const double> z_tail) const; // size dL-1

  private:
    models::BasketSpec spec_;
    PathConstruction r_;
    Vector c_;      // R_{j1}, sign-feasible
    Vector weight_; // w_l s0_l / d
    Vector drift_;  // (r - sigma_l^2/2) t_j
};

// CLE last-step pre-integration: conditional on the history and the
// complement coordinates, X_{d,1} is affine in y1 = u1^T z and the
// conditional expectation of 1{X_{d,1} <= K} is an exact normal CDF.
class ClePreint {
  public:
    // u: full orthogonal rotation whose first column is supported on the
    // last time step's coordinates.
    ClePreint(models::CleSpec spec, Matrix u);

    double operator()(std::span<const double> x_tail) const; // size dJ-1

    const Matrix& rotation() const { return u_; }

  private:
    models::CleSpec spec_;
    Matrix u_;
    Vector u1_last_; // loadings of u1 on the last step's J coordinates
};

// Conditional CDF/density of the log-normal sum given y_{-1}:
// cdf = Phi(y1*), density = phi(y1*) / h'(y1*) with h(y1*) = x.
class LognormalConditional {
  public:
    LognormalConditional(models::LognormalSumSpec spec, PathConstruction r);

    struct Result {
        double cdf = 0.0;
        double density = 0.0;
    };

    // One-dimensional section of h at a fixed conditioning point; the root
    // is warm-startable across increasing x (y1* is monotone in x).
    class Section {
      public:
        Result conditional(double x, double* warm = nullptr) const;

      private:
        friend class LognormalConditional;
        const LognormalConditional* owner_ = nullptr;
        Vector a_; // exp(mu_j + sum_{k>=2} R_jk y_k)
    };

    Section section(std::span<const double> y_tail) const; // size d-1

    Result conditional(double x, std::span<const double> y_tail) const {
        return section(y_tail).conditional(x);
    }

  private:
    models::LognormalSumSpec spec_;
    PathConstruction r_;
    Vector c_; // R_{j1} >= 0
};

} // namespace cas::preint
