#include "cas/cde.hpp"

#include "cas/parallel.hpp"
#include "cas/rng.hpp"
#include "cas/rqmc.hpp"
#include "cas/subspace.hpp"

#include <cmath>
#include <stdexcept>

namespace cas::cde {

Vector uniform_grid(double lo, double hi, int len) {
    if (len < 2 || hi <= lo) throw std::invalid_argument("uniform_grid: bad arguments");
    Vector g(len);
    const double step = (hi - lo) / (len - 1);
    for (int i = 0; i < len; ++i) g[i] = lo + step * i;
    return g;
}

Vector cde_curve(const models::LognormalSumSpec& spec, const PathConstruction& r,
                 const Vector& grid, int n, std::uint64_t seed) {
    const preint::LognormalConditional cond(spec, r);
    const int s = spec.d - 1;
    const auto gauss = rqmc::to_gaussian(rqmc::scramble(rqmc::sobol_points(n, s), seed));

    Vector curve(grid.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto section = cond.section(std::span<const double>(gauss.row(i), s));
        double warm = 0.0;
        bool have_warm = false;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const auto res = section.conditional(grid[g], have_warm ? &warm : nullptr);
            have_warm = true;
            curve[g] += res.density;
        }
    }
    for (double& v : curve) v /= n;
    return curve;
}

double mise(const Matrix& curves, const Vector& grid) {
    const int reps = curves.rows();
    const int len = curves.cols();
    if (reps < 2) throw std::invalid_argument("mise: need at least 2 replicates");
    if (len != static_cast<int>(grid.size())) throw std::invalid_argument("mise: grid mismatch");

    Vector var(len, 0.0);
    for (int g = 0; g < len; ++g) {
        double mean = 0.0;
        for (int r = 0; r < reps; ++r) mean += curves(r, g);
        mean /= reps;
        double acc = 0.0;
        for (int r = 0; r < reps; ++r) {
            const double d = curves(r, g) - mean;
            acc += d * d;
        }
        var[g] = acc / (reps - 1);
    }
    double integral = 0.0;
    for (int g = 0; g + 1 < len; ++g)
        integral += 0.5 * (var[g] + var[g + 1]) * (grid[g + 1] - grid[g]);
    return integral;
}

double neg_log2_mise(double mise_value) {
    if (mise_value <= 0.0) return 64.0;
    return std::min(-std::log2(mise_value), 64.0);
}

PathConstruction direct_construction(const models::LognormalSumSpec& spec) {
    PathConstruction pc;
    pc.sigma = spec.sigma;
    pc.kind = linalg::ConstructionKind::Cholesky;
    pc.r = linalg::reverse_cholesky(spec.sigma);
    return pc;
}

PathConstruction cas_construction(const models::LognormalSumSpec& spec, int m_grad, double eps_fd,
                                  std::uint64_t seed) {
    const PathConstruction r0 = linalg::cholesky_construction(spec.sigma);
    const subspace::Integrand h = [&](std::span<const double> y) {
        return models::lognormal_sum(spec, r0, y);
    };
    const subspace::GradientMoment c = subspace::estimate_c(h, spec.d, m_grad, eps_fd, seed);
    const subspace::SignPattern pattern{r0.r, Vector(spec.d, 1.0)};
    const Vector u1 = subspace::constrained_first_direction(c, pattern);
    const subspace::Rotation rot = subspace::cas_rotation(c, u1);
    return linalg::rotate_construction(r0, rot.u);
}

DensityEstimate estimate_density(const models::LognormalSumSpec& spec, const PathConstruction& r,
                                 const Vector& grid, int n, int reps, std::uint64_t seed,
                                 int workers) {
    if (reps < 2) throw std::invalid_argument("estimate_density: need at least 2 replicates");
    DensityEstimate out;
    out.grid = grid;
    out.curves = Matrix(reps, static_cast<int>(grid.size()));
    parallel_for(reps, workers, [&](int rep) {
        const Vector curve =
            cde_curve(spec, r, grid, n, rng::derive(seed, rng::kScramble, rep));
        for (std::size_t g = 0; g < grid.size(); ++g) out.curves(rep, g) = curve[g];
    });

    const int len = static_cast<int>(grid.size());
    out.mean_curve.assign(len, 0.0);
    out.var_curve.assign(len, 0.0);
    for (int g = 0; g < len; ++g) {
        double mean = 0.0;
        for (int rep = 0; rep < reps; ++rep) mean += out.curves(rep, g);
        mean /= reps;
        double acc = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            const double d = out.curves(rep, g) - mean;
            acc += d * d;
        }
        out.mean_curve[g] = mean;
        out.var_curve[g] = acc / (reps - 1);
    }
    out.mise = mise(out.curves, grid);
    out.neg_log2 = neg_log2_mise(out.mise);
    return out;
}

} // namespace cas::cde
