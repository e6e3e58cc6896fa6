#include "cas/greeks.hpp"

#include "cas/errors.hpp"
#include "cas/kernels.hpp"
#include "cas/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cas::greeks {

namespace {

thread_local Vector tl_b;
thread_local Vector tl_s;
thread_local Vector tl_z;

struct PathEval {
    double s_bar;
    const Vector* s; // S_j
    const Vector* b; // B_j = (R z)_j
};

PathEval eval_path(const models::GbmSpec& spec, const PathConstruction& r,
                   std::span<const double> z) {
    const int d = spec.d;
    if (static_cast<int>(z.size()) != d)
        throw std::invalid_argument("greek_pathwise: dim(z) != d");
    const double dt = spec.dt();
    Vector& b = tl_b;
    Vector& s = tl_s;
    b.resize(d);
    s.resize(d);
    for (int j = 0; j < d; ++j) {
        const double* row = r.r.row(j);
        double acc = 0.0;
        for (int k = 0; k < d; ++k) acc += row[k] * z[k];
        b[j] = acc;
        s[j] = (spec.r - 0.5 * spec.sigma * spec.sigma) * dt * (j + 1) + spec.sigma * acc;
    }
    kernels::active().exp_v(s.data(), s.data(), d);
    double mean = 0.0;
    for (int j = 0; j < d; ++j) {
        s[j] *= spec.s0;
        mean += s[j];
    }
    return {mean / d, &s, &b};
}

// The smooth factor g in g(z) 1{S_bar >= K}.
double smooth_factor(const models::GbmSpec& spec, GreekKind kind, const PathEval& path) {
    const int d = spec.d;
    const double dt = spec.dt();
    const double disc = std::exp(-spec.r * spec.t);
    const Vector& s = *path.s;
    const Vector& b = *path.b;
    switch (kind) {
        case GreekKind::Delta:
            return disc * path.s_bar / spec.s0;
        case GreekKind::Gamma: {
            const double x1 = b[0] / std::sqrt(dt);
            return disc * path.s_bar / (spec.s0 * spec.s0 * spec.sigma * spec.sigma * dt) *
                   (spec.sigma * std::sqrt(dt) * x1 - spec.sigma * spec.sigma * dt);
        }
        case GreekKind::Vega: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += s[j] * (b[j] - spec.sigma * dt * (j + 1));
            return disc * acc / d;
        }
        case GreekKind::Rho: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += dt * (j + 1) * s[j];
            return disc * (-spec.t * (path.s_bar - spec.k) + acc / d);
        }
        case GreekKind::Theta: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j)
                acc += s[j] * ((spec.r - 0.5 * spec.sigma * spec.sigma) *
                                   (static_cast<double>(j + 1) / d) +
                               spec.sigma * b[j] / (2.0 * spec.t));
            return -disc * (-spec.r * (path.s_bar - spec.k) + acc / d);
        }
    }
    return 0.0;
}

constexpr double kQMin = 1e-310;

} // namespace

std::string to_string(GreekKind kind) {
    switch (kind) {
        case GreekKind::Delta: return "delta";
        case GreekKind::Gamma: return "gamma";
        case GreekKind::Rho: return "rho";
        case GreekKind::Theta: return "theta";
        case GreekKind::Vega: return "vega";
    }
    return "?";
}

double greek_pathwise(const models::GbmSpec& spec, GreekKind kind, const PathConstruction& r,
                      std::span<const double> z) {
    const PathEval path = eval_path(spec, r, z);
    if (path.s_bar < spec.k) return 0.0;
    return smooth_factor(spec, kind, path);
}

SovTransform::SovTransform(models::GbmSpec spec, GreekKind kind, PathConstruction r)
    : spec_(spec), kind_(kind), r_(r), threshold_(spec, std::move(r)) {}

double SovTransform::warp(double z1, std::span<const double> z_tail) const {
    const preint::RootResult alpha = threshold_.threshold(z_tail);
    if (alpha.kind == preint::RootResult::Kind::AllAbove) return z1;
    if (alpha.kind == preint::RootResult::Kind::AllBelow)
        throw std::domain_error("SovTransform::warp: empty support");
    const double q = std::max(norm_sf(alpha.gamma) * norm_sf(z1), kQMin);
    return -norm_inv(std::min(q, 1.0 - 1e-16));
}

double SovTransform::operator()(std::span<const double> z) const {
    const int d = spec_.d;
    if (static_cast<int>(z.size()) != d)
        throw std::invalid_argument("SovTransform: dim(z) != d");
    const std::span<const double> tail = z.subspan(1);
    const preint::RootResult alpha = threshold_.threshold(tail);

    if (alpha.kind == preint::RootResult::Kind::AllBelow) return 0.0; // weight 0
    if (alpha.kind == preint::RootResult::Kind::AllAbove) {
        // alpha = -inf: T is the identity and the weight is one.
        const PathEval path = eval_path(spec_, r_, z);
        return smooth_factor(spec_, kind_, path);
    }

    const double weight = norm_sf(alpha.gamma);
    if (weight <= 0.0) return 0.0;
    const double q = std::max(weight * norm_sf(z[0]), kQMin);
    const double t = -norm_inv(std::min(q, 1.0 - 1e-16));

    Vector& zy = tl_z;
    zy.assign(z.begin(), z.end());
    zy[0] = t;
    const PathEval path = eval_path(spec_, r_, zy);
    return weight * smooth_factor(spec_, kind_, path);
}

double tail_exp_moment0(double c, double gamma) {
    return std::exp(0.5 * c * c) * norm_sf(gamma - c);
}

double tail_exp_moment1(double c, double gamma) {
    return std::exp(0.5 * c * c) * (c * norm_sf(gamma - c) + norm_pdf(gamma - c));
}

GreekPreint::GreekPreint(models::GbmSpec spec, GreekKind kind, PathConstruction r)
    : spec_(spec), kind_(kind), r_(std::move(r)) {
    const int d = spec_.d;
    if (r_.r.rows() != d || r_.r.cols() != d)
        throw std::invalid_argument("GreekPreint: construction must be d x d");
    c_.resize(d);
    drift_.resize(d);
    double scale = 0.0;
    for (int j = 0; j < d; ++j) scale = std::max(scale, std::fabs(r_.r(j, 0)));
    for (int j = 0; j < d; ++j) {
        const double rj1 = r_.r(j, 0);
        if (rj1 < -1e-10 * std::max(scale, 1e-300))
            throw std::invalid_argument("GreekPreint: R_{.,1} must be componentwise nonnegative");
        c_[j] = spec_.sigma * std::max(rj1, 0.0);
        drift_[j] = (spec_.r - 0.5 * spec_.sigma * spec_.sigma) * spec_.dt() * (j + 1);
    }
}

double GreekPreint::operator()(std::span<const double> z_tail) const {
    const int d = spec_.d;
    if (static_cast<int>(z_tail.size()) != d - 1)
        throw std::invalid_argument("GreekPreint: conditioning point must have size d-1");
    const double dt = spec_.dt();
    const double disc = std::exp(-spec_.r * spec_.t);

    // D_j = s0 exp(drift_j + sigma b_j); b_j excludes the z1 contribution.
    Vector& b = tl_b;
    Vector& dvals = tl_s;
    b.resize(d);
    dvals.resize(d);
    for (int j = 0; j < d; ++j) {
        const double* row = r_.r.row(j);
        double acc = 0.0;
        for (int k = 1; k < d; ++k) acc += row[k] * z_tail[k - 1];
        b[j] = acc;
        dvals[j] = drift_[j] + spec_.sigma * acc;
    }
    kernels::active().exp_v(dvals.data(), dvals.data(), d);
    for (int j = 0; j < d; ++j) dvals[j] *= spec_.s0;

    // Threshold of S_bar(z1) = (1/d) sum D_j e^{c_j z1} = K.
    Vector w(d);
    for (int j = 0; j < d; ++j) w[j] = dvals[j] / d;
    const preint::RootResult root = preint::find_root_monotone(
        [&](double z, double* slope) {
            double value = 0.0;
            kernels::active().exp_ray(w.data(), c_.data(), z, d, &value, slope);
            return value - spec_.k;
        },
        1e-12, 1e-10 * std::max(std::fabs(spec_.k), 1.0));

    if (root.kind == preint::RootResult::Kind::AllBelow) return 0.0;
    const bool unbounded = root.kind == preint::RootResult::Kind::AllAbove;
    const double gamma = unbounded ? 0.0 : root.gamma;

    Vector i0(d), i1(d);
    for (int j = 0; j < d; ++j) {
        const double half = std::exp(0.5 * c_[j] * c_[j]);
        if (unbounded) {
            i0[j] = half;
            i1[j] = c_[j] * half;
        } else {
            i0[j] = half * norm_sf(gamma - c_[j]);
            i1[j] = half * (c_[j] * norm_sf(gamma - c_[j]) + norm_pdf(gamma - c_[j]));
        }
    }
    const double sf_gamma = unbounded ? 1.0 : norm_sf(gamma);

    double price = 0.0; // E[(S_bar - K)_+ | z_tail]
    for (int j = 0; j < d; ++j) price += dvals[j] * i0[j] / d;
    price -= spec_.k * sf_gamma;

    switch (kind_) {
        case GreekKind::Delta: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += dvals[j] * i0[j];
            return disc * acc / (d * spec_.s0);
        }
        case GreekKind::Gamma: {
            const double r11 = c_[0] / spec_.sigma;
            const double b1 = b[0];
            double acc = 0.0;
            for (int j = 0; j < d; ++j)
                acc += dvals[j] * (spec_.sigma * r11 * i1[j] +
                                   (spec_.sigma * b1 - spec_.sigma * spec_.sigma * dt) * i0[j]);
            return disc * acc / (d * spec_.s0 * spec_.s0 * spec_.sigma * spec_.sigma * dt);
        }
        case GreekKind::Vega: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
                const double rj1 = c_[j] / spec_.sigma;
                acc += dvals[j] *
                       (rj1 * i1[j] + (b[j] - spec_.sigma * dt * (j + 1)) * i0[j]);
            }
            return disc * acc / d;
        }
        case GreekKind::Rho: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += dt * (j + 1) * dvals[j] * i0[j];
            return -spec_.t * disc * price + disc * acc / d;
        }
        case GreekKind::Theta: {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) {
                const double rj1 = c_[j] / spec_.sigma;
                acc += dvals[j] * ((spec_.r - 0.5 * spec_.sigma * spec_.sigma) *
                                       (static_cast<double>(j + 1) / d) * i0[j] +
                                   spec_.sigma / (2.0 * spec_.t) * (rj1 * i1[j] + b[j] * i0[j]));
            }
            return -(-spec_.r * disc * price + disc * acc / d);
        }
    }
    return 0.0;
}

namespace {

enum class ColumnSign { NonNegative, NonPositive, Mixed };

ColumnSign classify_column(const Vector& col) {
    double scale = 0.0;
    for (double v : col) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-10 * std::max(scale, 1e-300);
    bool pos = false, neg = false;
    for (double v : col) {
        if (v > tol) pos = true;
        if (v < -tol) neg = true;
    }
    if (pos && neg) return ColumnSign::Mixed;
    if (neg) return ColumnSign::NonPositive;
    return ColumnSign::NonNegative;
}

GreekRotation smoothed_as(const models::GbmSpec& spec, GreekKind kind, int m, double eps,
                          std::uint64_t seed, subspace::GradientMoment* c_out) {
    const PathConstruction r_std =
        linalg::bm_construction(spec.d, spec.dt(), linalg::ConstructionKind::Standard);
    const SovTransform smooth(spec, kind, r_std);
    subspace::GradientMoment c = subspace::estimate_c(
        [&](std::span<const double> z) { return smooth(z); }, spec.d, m, eps, seed);

    GreekRotation out;
    out.rotation = subspace::as_rotation(c);
    out.construction = linalg::rotate_construction(r_std, out.rotation.u);

    const ColumnSign sign = classify_column(out.construction.r.column(0));
    if (sign == ColumnSign::NonPositive) {
        // Eigenvector sign ambiguity; flip so pre-integration stays feasible.
        for (int i = 0; i < out.rotation.u.rows(); ++i) out.rotation.u(i, 0) = -out.rotation.u(i, 0);
        out.construction = linalg::rotate_construction(r_std, out.rotation.u);
    } else if (sign == ColumnSign::Mixed) {
        out.fell_back = true;
    }
    if (c_out) *c_out = std::move(c);
    return out;
}

} // namespace

GreekRotation greek_as_rotation(const models::GbmSpec& spec, GreekKind kind, int m, double eps,
                                std::uint64_t seed) {
    return smoothed_as(spec, kind, m, eps, seed, nullptr);
}

GreekRotation greek_rotation(const models::GbmSpec& spec, GreekKind kind, int m, double eps,
                             std::uint64_t seed) {
    subspace::GradientMoment c;
    GreekRotation out = smoothed_as(spec, kind, m, eps, seed, &c);
    if (!out.fell_back) return out;

    Vector u1;
    if (kind == GreekKind::Gamma) {
        // Keep z1 equal to the first standard-construction variable, matching
        // the x1 appearing in the gamma formula.
        u1.assign(spec.d, 0.0);
        u1[0] = 1.0;
    } else {
        // PCA first column expressed in the standard construction's z-space.
        const PathConstruction r_pca =
            linalg::bm_construction(spec.d, spec.dt(), linalg::ConstructionKind::Pca);
        const PathConstruction r_std =
            linalg::bm_construction(spec.d, spec.dt(), linalg::ConstructionKind::Standard);
        u1 = linalg::solve(r_std.r, r_pca.r.column(0));
        const double nrm = linalg::norm2(u1);
        for (double& v : u1) v /= nrm;
    }
    out.rotation = subspace::cas_rotation(c, u1);
    const PathConstruction r_std =
        linalg::bm_construction(spec.d, spec.dt(), linalg::ConstructionKind::Standard);
    out.construction = linalg::rotate_construction(r_std, out.rotation.u);
    return out;
}

} // namespace cas::greeks
