#include "cas/preint.hpp"

#include "cas/errors.hpp"
#include "cas/kernels.hpp"
#include "cas/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cas::preint {

namespace {

thread_local Vector tl_w;
thread_local Vector tl_e;
thread_local Vector tl_z;

constexpr double kSignTol = 1e-10;

// Validate a componentwise sign condition on a first column and return the
// clamped copy (tiny violations are numerical zeros from the truncation
// step; genuine violations throw).
Vector clamped_nonnegative(const Vector& col, const char* who) {
    double scale = 0.0;
    for (double v : col) scale = std::max(scale, std::fabs(v));
    Vector out(col.size());
    for (std::size_t j = 0; j < col.size(); ++j) {
        if (col[j] < -kSignTol * std::max(scale, 1e-300))
            throw std::invalid_argument(std::string(who) + ": first column has negative entries");
        out[j] = std::max(col[j], 0.0);
    }
    if (scale == 0.0) throw DegenerateDirection(std::string(who) + ": first column is zero");
    return out;
}

double root_tol_f(double k) { return 1e-10 * std::max(std::fabs(k), 1.0); }

} // namespace

// ---------------------------------------------------------------------------
// Asian call under Black-Scholes

AsianGbmPreint::AsianGbmPreint(models::GbmSpec spec, PathConstruction r)
    : spec_(spec), r_(std::move(r)) {
    const int d = spec_.d;
    if (r_.r.rows() != d || r_.r.cols() != d)
        throw std::invalid_argument("AsianGbmPreint: construction must be d x d");
    const Vector col = clamped_nonnegative(r_.r.column(0), "AsianGbmPreint");
    c_.resize(d);
    drift_.resize(d);
    const double dt = spec_.dt();
    for (int j = 0; j < d; ++j) {
        c_[j] = spec_.sigma * col[j];
        drift_[j] = (spec_.r - 0.5 * spec_.sigma * spec_.sigma) * dt * (j + 1);
    }
}

namespace {

// w_j = (s0/d) exp(drift_j + coupling_j); shared by value and threshold.
void gbm_weights(const models::GbmSpec& spec, const Matrix& r, const Vector& drift,
                 std::span<const double> z_tail, Vector& w) {
    const int d = spec.d;
    Vector& e = tl_e;
    e.resize(d);
    const double lw = std::log(spec.s0 / d);
    for (int j = 0; j < d; ++j) {
        const double* row = r.row(j);
        double b = 0.0;
        for (int k = 1; k < d; ++k) b += row[k] * z_tail[k - 1];
        e[j] = drift[j] + spec.sigma * b + lw;
    }
    w.resize(d);
    kernels::active().exp_v(e.data(), w.data(), d);
}

RootResult solve_threshold(const Vector& w, const Vector& c, double k) {
    return find_root_monotone(
        [&](double z, double* slope) {
            double value = 0.0;
            kernels::active().exp_ray(w.data(), c.data(), z, w.size(), &value, slope);
            return value - k;
        },
        1e-12, root_tol_f(k));
}

// sum_j w_j e^{c_j^2/2} PhiBar(gamma - c_j) - K PhiBar(gamma), with the
// AllAbove/AllBelow conventions gamma = -inf / +inf.
double tail_formula(const Vector& w, const Vector& c, double k, const RootResult& root) {
    if (root.kind == RootResult::Kind::AllBelow) return 0.0;
    const std::size_t n = w.size();
    double acc = 0.0;
    if (root.kind == RootResult::Kind::AllAbove) {
        for (std::size_t j = 0; j < n; ++j)
            acc += w[j] * std::exp(0.5 * c[j] * c[j]);
        return acc - k;
    }
    const double gamma = root.gamma;
    for (std::size_t j = 0; j < n; ++j)
        acc += w[j] * std::exp(0.5 * c[j] * c[j]) * norm_sf(gamma - c[j]);
    return acc - k * norm_sf(gamma);
}

} // namespace

double AsianGbmPreint::operator()(std::span<const double> z_tail) const {
    if (static_cast<int>(z_tail.size()) != spec_.d - 1)
        throw std::invalid_argument("AsianGbmPreint: conditioning point must have size d-1");
    Vector& w = tl_w;
    gbm_weights(spec_, r_.r, drift_, z_tail, w);
    return tail_formula(w, c_, spec_.k, solve_threshold(w, c_, spec_.k));
}

RootResult AsianGbmPreint::threshold(std::span<const double> z_tail) const {
    Vector& w = tl_w;
    gbm_weights(spec_, r_.r, drift_, z_tail, w);
    return solve_threshold(w, c_, spec_.k);
}

// ---------------------------------------------------------------------------
// Asian call under stochastic volatility

SvPreint::SvPreint(models::SvSpec spec, subspace::Rotation rot)
    : spec_(spec), u_(std::move(rot.u)) {
    const int d = spec_.d;
    if (u_.rows() != 2 * d || u_.cols() != 2 * d)
        throw std::invalid_argument("SvPreint: rotation must be 2d x 2d");
    const Vector u1 = u_.column(0);
    for (int i = d; i < 2 * d; ++i)
        if (std::fabs(u1[i]) > 1e-10)
            throw std::invalid_argument("SvPreint: first column must vanish on the volatility block");
    Vector head(u1.begin(), u1.begin() + d);
    u1_head_ = clamped_nonnegative(head, "SvPreint");
}

double SvPreint::operator()(std::span<const double> z_tail) const {
    const int d = spec_.d;
    const int s = 2 * d;
    if (static_cast<int>(z_tail.size()) != s - 1)
        throw std::invalid_argument("SvPreint: conditioning point must have size 2d-1");

    // x = U (0, z_tail): the pre-integrated coordinate contributes nothing
    // to zeta_j or the V path.
    Vector& x = tl_z;
    x.assign(s, 0.0);
    for (int i = 0; i < s; ++i) {
        const double* row = u_.row(i);
        double acc = 0.0;
        for (int k = 1; k < s; ++k) acc += row[k] * z_tail[k - 1];
        x[i] = acc;
    }

    const Vector sq = models::sv_sqrt_v(spec_, x.data() + d);
    const double dt = spec_.dt();
    const double sqdt = std::sqrt(dt);
    const double rho = spec_.rho;
    const double rhobar = std::sqrt(1.0 - rho * rho);
    const double lw = std::log(spec_.s0 / d);

    Vector& e = tl_e;
    Vector& w = tl_w;
    e.resize(d);
    Vector c(d);
    double logs = 0.0, csum = 0.0;
    for (int j = 0; j < d; ++j) {
        const double vprev = sq[j] * sq[j];
        logs += (spec_.r - 0.5 * vprev) * dt + sq[j] * sqdt * (rhobar * x[j] + rho * x[d + j]);
        csum += sq[j] * u1_head_[j];
        e[j] = logs + lw;
        c[j] = sqdt * rhobar * csum;
    }
    w.resize(d);
    kernels::active().exp_v(e.data(), w.data(), d);
    return tail_formula(w, c, spec_.k, solve_threshold(w, c, spec_.k));
}

// ---------------------------------------------------------------------------
// Basket / spread

BasketPreint::BasketPreint(models::BasketSpec spec, PathConstruction r)
    : spec_(spec), r_(std::move(r)) {
    const int n = spec_.dim();
    if (r_.r.rows() != n || r_.r.cols() != n)
        throw std::invalid_argument("BasketPreint: construction must be dL x dL");
    const Vector col = r_.r.column(0);
    double scale = 0.0;
    for (double v : col) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) throw DegenerateDirection("BasketPreint: first column is zero");
    c_.resize(n);
    weight_.resize(n);
    drift_.resize(n);
    const double dt = spec_.dt();
    for (int j = 0; j < n; ++j) {
        const int asset = j / spec_.d;
        const double signed_entry = spec_.weights[asset] * col[j];
        if (signed_entry < -kSignTol * scale)
            throw std::invalid_argument(
                "BasketPreint: first column violates the sign constraint set");
        // Clamp numerical zeros so the section is exactly monotone.
        c_[j] = (signed_entry <= 0.0) ? 0.0 : col[j];
        weight_[j] = spec_.weights[asset] * spec_.s0[asset] / spec_.d;
        drift_[j] = (spec_.r - 0.5 * spec_.sigma[asset] * spec_.sigma[asset]) * dt * ((j % spec_.d) + 1);
    }
}

double BasketPreint::operator()(std::span<const double> z_tail) const {
    const int n = spec_.dim();
    if (static_cast<int>(z_tail.size()) != n - 1)
        throw std::invalid_argument("BasketPreint: conditioning point must have size dL-1");

    Vector& e = tl_e;
    Vector& w = tl_w;
    e.resize(n);
    for (int j = 0; j < n; ++j) {
        const double* row = r_.r.row(j);
        double b = 0.0;
        for (int k = 1; k < n; ++k) b += row[k] * z_tail[k - 1];
        e[j] = drift_[j] + b;
    }
    w.resize(n);
    kernels::active().exp_v(e.data(), w.data(), n);
    for (int j = 0; j < n; ++j) w[j] *= weight_[j];
    return tail_formula(w, c_, spec_.k, solve_threshold(w, c_, spec_.k));
}

// ---------------------------------------------------------------------------
// CLE last-step pre-integration

ClePreint::ClePreint(models::CleSpec spec, Matrix u) : spec_(spec), u_(std::move(u)) {
    const int n = spec_.dim();
    const int nj = spec_.n_reactions;
    if (u_.rows() != n || u_.cols() != n)
        throw std::invalid_argument("ClePreint: rotation must be dJ x dJ");
    const Vector u1 = u_.column(0);
    for (int i = 0; i < n - nj; ++i)
        if (std::fabs(u1[i]) > 1e-12)
            throw std::invalid_argument(
                "ClePreint: first column must be supported on the last time step");
    u1_last_.assign(u1.end() - nj, u1.end());
}

double ClePreint::operator()(std::span<const double> x_tail) const {
    const int n = spec_.dim();
    const int nj = spec_.n_reactions;
    const int d = spec_.d;
    if (static_cast<int>(x_tail.size()) != n - 1)
        throw std::invalid_argument("ClePreint: conditioning point must have size dJ-1");

    Vector& z = tl_z;
    z.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = u_.row(i);
        double acc = 0.0;
        for (int k = 1; k < n; ++k) acc += row[k] * x_tail[k - 1];
        z[i] = acc;
    }

    Vector x = spec_.x0;
    for (int k = 0; k + 1 < d; ++k)
        x = models::cle_step(spec_, x, std::span<const double>(z.data() + k * nj, nj));

    const Vector a = models::cle_propensities(spec_, x);
    double m = x[0], c = 0.0;
    for (int j = 0; j < nj; ++j) {
        const double diff = std::sqrt(std::max(a[j], 0.0) * spec_.tau);
        m += spec_.nu(0, j) * (spec_.tau * a[j] + diff * z[(d - 1) * nj + j]);
        c += spec_.nu(0, j) * diff * u1_last_[j];
    }
    if (c == 0.0)
        throw DegenerateDirection("ClePreint: pre-integrated slope on X_{d,1} is zero");
    const double t = (spec_.k - m) / c;
    return (c > 0.0) ? norm_cdf(t) : norm_sf(t);
}

// ---------------------------------------------------------------------------
// Log-normal sum conditional CDF / density

LognormalConditional::LognormalConditional(models::LognormalSumSpec spec, PathConstruction r)
    : spec_(spec), r_(std::move(r)) {
    if (r_.r.rows() != spec_.d || r_.r.cols() != spec_.d)
        throw std::invalid_argument("LognormalConditional: construction must be d x d");
    c_ = clamped_nonnegative(r_.r.column(0), "LognormalConditional");
}

LognormalConditional::Section LognormalConditional::section(std::span<const double> y_tail) const {
    const int d = spec_.d;
    if (static_cast<int>(y_tail.size()) != d - 1)
        throw std::invalid_argument("LognormalConditional: conditioning point must have size d-1");
    Section s;
    s.owner_ = this;
    Vector e(d);
    for (int j = 0; j < d; ++j) {
        const double* row = r_.r.row(j);
        double b = 0.0;
        for (int k = 1; k < d; ++k) b += row[k] * y_tail[k - 1];
        e[j] = spec_.mu[j] + b;
    }
    s.a_.resize(d);
    kernels::active().exp_v(e.data(), s.a_.data(), d);
    return s;
}

LognormalConditional::Result LognormalConditional::Section::conditional(double x,
                                                                        double* warm) const {
    const Vector& c = owner_->c_;
    const std::size_t d = a_.size();
    const RootResult root = find_root_monotone(
        [&](double y, double* slope) {
            double value = 0.0;
            kernels::active().exp_ray(a_.data(), c.data(), y, d, &value, slope);
            return value - x;
        },
        1e-12, root_tol_f(x), warm);

    if (root.kind == RootResult::Kind::AllAbove) return {0.0, 0.0}; // x below inf h
    if (root.kind == RootResult::Kind::AllBelow) return {1.0, 0.0};
    if (warm) *warm = root.gamma;
    double value = 0.0, slope = 0.0;
    kernels::active().exp_ray(a_.data(), c.data(), root.gamma, d, &value, &slope);
    Result out;
    out.cdf = norm_cdf(root.gamma);
    out.density = (slope > 0.0) ? norm_pdf(root.gamma) / slope : 0.0;
    return out;
}

} // namespace cas::preint
