#include "cas/models.hpp"

#include "cas/errors.hpp"
#include "cas/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cas::models {

namespace {

thread_local Vector tl_buf_a;
thread_local Vector tl_buf_b;

} // namespace

double asian_mean_price(const GbmSpec& spec, const PathConstruction& r,
                        std::span<const double> z) {
    const int d = spec.d;
    if (static_cast<int>(z.size()) != d)
        throw std::invalid_argument("asian_mean_price: dim(z) != d");
    const double dt = spec.dt();
    const double drift = (spec.r - 0.5 * spec.sigma * spec.sigma) * dt;

    Vector& e = tl_buf_a;
    e.resize(d);
    for (int j = 0; j < d; ++j) {
        const double* row = r.r.row(j);
        double b = 0.0;
        for (int k = 0; k < d; ++k) b += row[k] * z[k];
        e[j] = drift * (j + 1) + spec.sigma * b;
    }
    Vector& w = tl_buf_b;
    w.assign(d, spec.s0 / d);
    return kernels::active().dot_exp(w.data(), e.data(), d);
}

double asian_call(const GbmSpec& spec, const PathConstruction& r, std::span<const double> z) {
    return std::max(asian_mean_price(spec, r, z) - spec.k, 0.0);
}

Vector sv_sqrt_v(const SvSpec& spec, const double* x2) {
    const int d = spec.d;
    const double dt = spec.dt();
    const double sqdt = std::sqrt(dt);
    Vector sq(d);
    switch (spec.kind) {
        case SvKind::HullWhite: {
            double logv = std::log(spec.v0);
            const double drift = (spec.nu - 0.5 * spec.xi * spec.xi) * dt;
            for (int j = 0; j < d; ++j) {
                sq[j] = std::exp(0.5 * logv);
                logv += drift + spec.xi * sqdt * x2[j];
            }
            break;
        }
        case SvKind::Heston: {
            double v = spec.v0;
            for (int j = 0; j < d; ++j) {
                const double vplus = std::max(v, 0.0);
                sq[j] = std::sqrt(vplus);
                v += spec.kappa * (spec.theta - v) * dt + spec.sigma_v * std::sqrt(vplus * dt) * x2[j];
            }
            break;
        }
        case SvKind::SteinStein: {
            // Diffusion sigma_v * V as displayed for this model family.
            double v = spec.v0;
            for (int j = 0; j < d; ++j) {
                sq[j] = std::sqrt(std::max(v, 0.0));
                v += spec.kappa * (spec.theta - v) * dt + spec.sigma_v * v * sqdt * x2[j];
            }
            break;
        }
    }
    return sq;
}

double sv_asian_from_x(const SvSpec& spec, const double* x1, const double* x2) {
    const int d = spec.d;
    const double dt = spec.dt();
    const double sqdt = std::sqrt(dt);
    const double rho = spec.rho;
    const double rhobar = std::sqrt(1.0 - rho * rho);

    const Vector sq = sv_sqrt_v(spec, x2);
    Vector& e = tl_buf_a;
    e.resize(d);
    double logs = 0.0;
    for (int j = 0; j < d; ++j) {
        const double vprev = sq[j] * sq[j];
        logs += (spec.r - 0.5 * vprev) * dt + sq[j] * sqdt * (rhobar * x1[j] + rho * x2[j]);
        e[j] = logs;
    }
    Vector& w = tl_buf_b;
    w.assign(d, spec.s0 / d);
    const double mean = kernels::active().dot_exp(w.data(), e.data(), d);
    if (!std::isfinite(mean)) throw EvaluationError("sv_asian: non-finite trajectory");
    return std::max(mean - spec.k, 0.0);
}

double sv_asian(const SvSpec& spec, const Matrix& u, std::span<const double> z) {
    const int d = spec.d;
    if (static_cast<int>(z.size()) != 2 * d)
        throw std::invalid_argument("sv_asian: dim(z) != 2d");
    if (u.rows() == 0) return sv_asian_from_x(spec, z.data(), z.data() + d);
    if (u.rows() != 2 * d || u.cols() != 2 * d)
        throw std::invalid_argument("sv_asian: rotation must be 2d x 2d");
    Vector x(2 * d, 0.0);
    for (int i = 0; i < 2 * d; ++i) {
        const double* row = u.row(i);
        double acc = 0.0;
        for (int k = 0; k < 2 * d; ++k) acc += row[k] * z[k];
        x[i] = acc;
    }
    return sv_asian_from_x(spec, x.data(), x.data() + d);
}

Matrix basket_covariance(const BasketSpec& spec) {
    const int d = spec.d, l = spec.l;
    const Matrix sigma_bm = linalg::bm_covariance(d, spec.dt());
    Matrix lambda(d * l, d * l);
    for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b) {
            const double scale = spec.corr(a, b) * spec.sigma[a] * spec.sigma[b];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) lambda(a * d + i, b * d + j) = scale * sigma_bm(i, j);
        }
    return lambda;
}

PathConstruction two_bm_construction(const BasketSpec& spec, linalg::ConstructionKind kind) {
    const int d = spec.d, l = spec.l;
    // The upper-triangular correlation factor keeps the first coordinate
    // block driving only the first asset.
    const PathConstruction base = linalg::bm_construction(d, spec.dt(), kind);
    const Matrix a = linalg::reverse_cholesky(spec.corr);

    PathConstruction pc;
    pc.kind = kind;
    pc.sigma = basket_covariance(spec);
    pc.r = Matrix(d * l, d * l);
    for (int ai = 0; ai < l; ++ai)
        for (int bj = 0; bj < l; ++bj) {
            const double scale = spec.sigma[ai] * a(ai, bj);
            if (scale == 0.0) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    pc.r(ai * d + i, bj * d + j) = scale * base.r(i, j);
        }
    return pc;
}

double basket_mean_price(const BasketSpec& spec, const PathConstruction& r,
                         std::span<const double> z) {
    const int d = spec.d, l = spec.l, n = d * l;
    if (static_cast<int>(z.size()) != n)
        throw std::invalid_argument("basket_mean_price: dim(z) != d*L");
    const double dt = spec.dt();

    Vector& e = tl_buf_a;
    Vector& w = tl_buf_b;
    e.resize(n);
    w.resize(n);
    for (int a = 0; a < l; ++a) {
        const double drift = (spec.r - 0.5 * spec.sigma[a] * spec.sigma[a]) * dt;
        const double weight = spec.weights[a] * spec.s0[a] / d;
        for (int j = 0; j < d; ++j) {
            const int row = a * d + j;
            const double* rrow = r.r.row(row);
            double b = 0.0;
            for (int k = 0; k < n; ++k) b += rrow[k] * z[k];
            e[row] = drift * (j + 1) + b;
            w[row] = weight;
        }
    }
    return kernels::active().dot_exp(w.data(), e.data(), n);
}

double basket_payoff(const BasketSpec& spec, const PathConstruction& r,
                     std::span<const double> z) {
    return std::max(basket_mean_price(spec, r, z) - spec.k, 0.0);
}

CleSpec cle_isomerization(double c1, double c2, double x01, double x02, double t, double tau,
                          double k) {
    CleSpec spec;
    spec.n_species = 2;
    spec.n_reactions = 2;
    spec.nu = Matrix(2, 2);
    spec.nu(0, 0) = 1.0;  spec.nu(1, 0) = -1.0;
    spec.nu(0, 1) = -1.0; spec.nu(1, 1) = 1.0;
    spec.reactant_order = Matrix(2, 2);
    spec.reactant_order(0, 0) = 1.0; // a1 = c1 X1
    spec.reactant_order(1, 1) = 1.0; // a2 = c2 X2
    spec.rates = {c1, c2};
    spec.x0 = {x01, x02};
    spec.tau = tau;
    spec.d = static_cast<int>(std::lround(t / tau));
    spec.k = k;
    return spec;
}

Vector cle_propensities(const CleSpec& spec, const Vector& x) {
    Vector a(spec.n_reactions);
    for (int j = 0; j < spec.n_reactions; ++j) {
        double p = spec.rates[j];
        for (int i = 0; i < spec.n_species; ++i) {
            const double order = spec.reactant_order(i, j);
            if (order == 0.0) continue;
            p *= (order == 1.0) ? x[i] : std::pow(x[i], order);
        }
        a[j] = p;
    }
    return a;
}

Vector cle_step(const CleSpec& spec, const Vector& x, std::span<const double> z_step) {
    const Vector a = cle_propensities(spec, x);
    Vector next = x;
    for (int j = 0; j < spec.n_reactions; ++j) {
        const double noise = std::sqrt(std::max(a[j], 0.0) * spec.tau) * z_step[j];
        const double drift = spec.tau * a[j];
        for (int i = 0; i < spec.n_species; ++i) next[i] += spec.nu(i, j) * (drift + noise);
    }
    return next;
}

CleResult cle_trajectory(const CleSpec& spec, std::span<const double> z) {
    const int nj = spec.n_reactions, ns = spec.n_species, d = spec.d;
    if (static_cast<int>(z.size()) != d * nj)
        throw std::invalid_argument("cle_trajectory: dim(z) != d*J");

    CleResult out;
    out.history = Matrix(d + 1, ns);
    Vector x = spec.x0;
    for (int i = 0; i < ns; ++i) out.history(0, i) = x[i];

    for (int k = 0; k < d; ++k) {
        x = cle_step(spec, x, z.subspan(static_cast<std::size_t>(k) * nj, nj));
        for (int i = 0; i < ns; ++i) out.history(k + 1, i) = x[i];
    }
    out.final_state = x;
    return out;
}

double cle_indicator(const CleSpec& spec, std::span<const double> z) {
    return cle_trajectory(spec, z).final_state[0] <= spec.k ? 1.0 : 0.0;
}

double cle_smoothed(const CleSpec& spec, std::span<const double> z) {
    const double x1 = cle_trajectory(spec, z).final_state[0];
    return 0.5 * (1.0 + std::tanh((x1 - spec.k) / 5.0));
}

LognormalSumSpec LognormalSumSpec::autocorrelated(int d, double rho) {
    LognormalSumSpec spec;
    spec.d = d;
    spec.mu.assign(d, 0.0);
    spec.sigma = Matrix(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) spec.sigma(i, j) = std::pow(rho, std::abs(i - j));
    return spec;
}

double lognormal_sum(const LognormalSumSpec& spec, const PathConstruction& r,
                     std::span<const double> y) {
    const int d = spec.d;
    if (static_cast<int>(y.size()) != d || static_cast<int>(spec.mu.size()) != d)
        throw std::invalid_argument("lognormal_sum: dimension mismatch");
    Vector& e = tl_buf_a;
    e.resize(d);
    for (int j = 0; j < d; ++j) {
        const double* row = r.r.row(j);
        double b = 0.0;
        for (int k = 0; k < d; ++k) b += row[k] * y[k];
        e[j] = spec.mu[j] + b;
    }
    Vector& w = tl_buf_b;
    w.assign(d, 1.0);
    return kernels::active().dot_exp(w.data(), e.data(), d);
}

} // namespace cas::models
