#pragma once

#include "cas/models.hpp"
#include "cas/preint.hpp"

#include <cstdint>

namespace cas::cde {

using linalg::Matrix;
using linalg::PathConstruction;
using linalg::Vector;

// Uniform evaluation grid, endpoints included.
Vector uniform_grid(double lo, double hi, int len);

// One replicate of the conditional density estimator: for each grid point,
// the average over n scrambled-Sobol' samples of y_{-1} of the conditional
// density of h(y) at x. Roots are warm-started across the (increasing) grid.
Vector cde_curve(const models::LognormalSumSpec& spec, const PathConstruction& r,
                 const Vector& grid, int n, std::uint64_t seed);

// MISE as the trapezoid integral of the across-replicate sample variance
// (the estimator is unbiased, so MISE equals integrated variance).
double mise(const Matrix& curves, const Vector& grid);

// -log2(MISE), capped at 64 when the curves are identical.
double neg_log2_mise(double mise_value);

// The hide-one-term baseline: Cholesky factor in reversed index order, so
// y1 drives only z1 and the sign condition holds for any correlation.
PathConstruction direct_construction(const models::LognormalSumSpec& spec);

// CAS construction: first direction from the sign-constrained projection of
// the top gradient-PCA direction through R0 = chol(Sigma), remaining columns
// from the constrained active subspace.
PathConstruction cas_construction(const models::LognormalSumSpec& spec, int m_grad, double eps_fd,
                                  std::uint64_t seed);

struct DensityEstimate {
    Vector grid;
    Matrix curves; // replicate-by-grid
    Vector mean_curve;
    Vector var_curve; // across-replicate variance per grid point
    double mise = 0.0;
    double neg_log2 = 0.0;
};

DensityEstimate estimate_density(const models::LognormalSumSpec& spec, const PathConstruction& r,
                                 const Vector& grid, int n, int reps, std::uint64_t seed,
                                 int workers = 0);

} // namespace cas::cde
