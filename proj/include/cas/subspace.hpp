#pragma once

#include "cas/linalg.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <variant>

namespace cas::subspace {

using linalg::Matrix;
using linalg::PathConstruction;
using linalg::Vector;

using Integrand = std::function<double(std::span<const double>)>;

// Estimated second-moment matrix of the gradient, C_hat ~ E[grad f grad f^T].
// Symmetric positive semi-definite by construction.
struct GradientMoment {
    Matrix c_hat;
    int sample_count = 0;
    double fd_step = 0.0;

    int order() const { return c_hat.rows(); }
};

// How the first column of a rotation was chosen.
struct Unconstrained {};
struct FixedVector {
    Vector u1;
};
struct BlockSupport {
    std::vector<int> indices; // 0-based, nonempty
};
struct SignPattern {
    Matrix r0;    // construction whose first column must obey the signs
    Vector signs; // +1/-1 per coordinate of R0 * u1
};
using FirstDirectionConstraint = std::variant<Unconstrained, FixedVector, BlockSupport, SignPattern>;

struct Rotation {
    Matrix u; // orthogonal
    FirstDirectionConstraint constraint;

    Vector first_column() const { return u.column(0); }
};

// Forward difference (f(x + eps e_j) - f(x)) / eps per coordinate.
Vector fd_gradient(const Integrand& f, const Vector& x, double eps = 1e-6);

// C_hat = (1/M) sum grad f(x_i) grad f(x_i)^T at M scrambled-Sobol' Gaussian
// points. M should be a power of two.
GradientMoment estimate_c(const Integrand& f, int s, int m, double eps, std::uint64_t seed);

// Unconstrained active subspace: eigenvectors of C_hat, descending.
Rotation as_rotation(const GradientMoment& c);

// Constrained active subspace: first column exactly u1, remaining columns
// V U-tilde where V spans the complement of u1 and U-tilde diagonalizes
// V^T C_hat V in descending order.
Rotation cas_rotation(const GradientMoment& c, const Vector& u1);

// First-direction selection for BlockSupport and SignPattern constraints.
Vector constrained_first_direction(const GradientMoment& c,
                                   const FirstDirectionConstraint& constraint);

} // namespace cas::subspace
