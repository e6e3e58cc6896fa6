#include "cas/subspace.hpp"

#include "cas/errors.hpp"
#include "cas/rng.hpp"
#include "cas/rqmc.hpp"

#include <cmath>
#include <stdexcept>

namespace cas::subspace {

Vector fd_gradient(const Integrand& f, const Vector& x, double eps) {
    const int s = static_cast<int>(x.size());
    const double f0 = f(std::span<const double>(x));
    if (!std::isfinite(f0)) throw EvaluationError("fd_gradient: f(x) is not finite");
    Vector g(s);
    Vector xp = x;
    for (int j = 0; j < s; ++j) {
        const double old = xp[j];
        xp[j] = old + eps;
        const double fj = f(std::span<const double>(xp));
        if (!std::isfinite(fj))
            throw EvaluationError("fd_gradient: f(x + eps e_j) is not finite", j);
        g[j] = (fj - f0) / eps;
        xp[j] = old;
    }
    return g;
}

GradientMoment estimate_c(const Integrand& f, int s, int m, double eps, std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("estimate_c: m must be >= 1");
    const auto pts = rqmc::scramble(rqmc::sobol_points(m, s), rng::derive(seed, rng::kGradients));
    const auto gauss = rqmc::to_gaussian(pts);

    GradientMoment out;
    out.c_hat = Matrix(s, s);
    out.sample_count = m;
    out.fd_step = eps;
    Vector x(s);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < s; ++j) x[j] = gauss(i, j);
        const Vector g = fd_gradient(f, x, eps);
        for (int a = 0; a < s; ++a) {
            if (g[a] == 0.0) continue;
            for (int b = 0; b <= a; ++b) out.c_hat(a, b) += g[a] * g[b];
        }
    }
    const double inv = 1.0 / m;
    for (int a = 0; a < s; ++a)
        for (int b = 0; b <= a; ++b) {
            out.c_hat(a, b) *= inv;
            out.c_hat(b, a) = out.c_hat(a, b);
        }
    return out;
}

Rotation as_rotation(const GradientMoment& c) {
    const linalg::SpectralDecomposition eig = linalg::sym_eig(c.c_hat);
    return Rotation{eig.eigenvectors, Unconstrained{}};
}

Rotation cas_rotation(const GradientMoment& c, const Vector& u1) {
    const int s = c.order();
    if (static_cast<int>(u1.size()) != s)
        throw std::invalid_argument("cas_rotation: u1 dimension mismatch");
    if (std::fabs(linalg::norm2(u1) - 1.0) > 1e-10)
        throw std::invalid_argument("cas_rotation: u1 is not a unit vector");

    const Matrix v = linalg::householder_complement(u1);
    const Matrix ct = linalg::matmul(linalg::transpose(v), linalg::matmul(c.c_hat, v));
    const linalg::SpectralDecomposition eig = linalg::sym_eig(ct);
    const Matrix tail = linalg::matmul(v, eig.eigenvectors);

    Rotation rot;
    rot.u = Matrix(s, s);
    rot.u.set_column(0, u1);
    for (int j = 1; j < s; ++j)
        for (int i = 0; i < s; ++i) rot.u(i, j) = tail(i, j - 1);
    rot.constraint = FixedVector{u1};
    return rot;
}

Vector constrained_first_direction(const GradientMoment& c,
                                   const FirstDirectionConstraint& constraint) {
    const int s = c.order();

    if (const auto* block = std::get_if<BlockSupport>(&constraint)) {
        const auto& idx = block->indices;
        if (idx.empty()) throw std::invalid_argument("BlockSupport: empty index set");
        const int m = static_cast<int>(idx.size());
        Matrix sub(m, m);
        double scale = 0.0;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                sub(a, b) = c.c_hat(idx[a], idx[b]);
                scale = std::max(scale, std::fabs(sub(a, b)));
            }
        if (scale == 0.0)
            throw DegenerateDirection("BlockSupport: principal submatrix is all zero");
        const linalg::SpectralDecomposition eig = linalg::sym_eig(sub);
        Vector u1(s, 0.0);
        for (int a = 0; a < m; ++a) u1[idx[a]] = eig.eigenvectors(a, 0);
        return u1;
    }

    if (const auto* sp = std::get_if<SignPattern>(&constraint)) {
        if (sp->r0.rows() != s || static_cast<int>(sp->signs.size()) != s)
            throw std::invalid_argument("SignPattern: shape mismatch");
        const linalg::SpectralDecomposition eig = linalg::sym_eig(c.c_hat);
        Vector r1 = linalg::matvec(sp->r0, eig.eigenvectors.column(0));

        auto feasible_mass = [&](const Vector& r) {
            double in = 0.0, out = 0.0;
            for (int j = 0; j < s; ++j) {
                if (sp->signs[j] * r[j] >= 0.0) in += r[j] * r[j];
                else out += r[j] * r[j];
            }
            return std::pair{in, out};
        };
        auto [in, out] = feasible_mass(r1);
        if (in < out)
            for (double& x : r1) x = -x;
        // Project into the sign-feasible cone by zeroing violating entries.
        double kept = 0.0;
        for (int j = 0; j < s; ++j) {
            if (sp->signs[j] * r1[j] < 0.0) r1[j] = 0.0;
            kept += r1[j] * r1[j];
        }
        if (kept == 0.0)
            throw DegenerateDirection("SignPattern: truncation produced the zero vector");
        Vector u1 = linalg::solve(sp->r0, r1);
        const double nrm = linalg::norm2(u1);
        if (nrm == 0.0) throw DegenerateDirection("SignPattern: zero direction after solve");
        for (double& x : u1) x /= nrm;
        return u1;
    }

    throw std::invalid_argument(
        "constrained_first_direction: constraint must be BlockSupport or SignPattern");
}

} // namespace cas::subspace
