#include "cas/linalg.hpp"

#include "cas/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cas::linalg {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(int j) const {
    Vector v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void Matrix::set_column(int j, const Vector& v) {
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.row(k);
            double* crow = c.row(i);
            for (int j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Vector matvec(const Matrix& a, const Vector& x) {
    if (a.cols() != static_cast<int>(x.size()))
        throw std::invalid_argument("matvec: shape mismatch");
    Vector y(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        const double* row = a.row(i);
        double acc = 0.0;
        for (int j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::fabs(a(i, j) - b(i, j)));
    return m;
}

double dot(const Vector& a, const Vector& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

namespace {

bool is_lower_triangular(const Matrix& a) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != 0.0) return false;
    return true;
}

void require_symmetric(const Matrix& s) {
    if (s.rows() != s.cols()) throw std::invalid_argument("matrix is not square");
    double scale = 0.0;
    for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) scale = std::max(scale, std::fabs(s(i, j)));
    const double tol = 1e-12 * std::max(scale, 1.0);
    for (int i = 0; i < s.rows(); ++i)
        for (int j = i + 1; j < s.cols(); ++j)
            if (std::fabs(s(i, j) - s(j, i)) > tol)
                throw std::invalid_argument("matrix is not symmetric within tolerance");
}

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

double frobenius(const Matrix& a) {
    double acc = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

} // namespace

Vector solve(const Matrix& a, const Vector& b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve: shape mismatch");
    if (is_lower_triangular(a)) {
        Vector x(b);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
            if (a(i, i) == 0.0) throw std::invalid_argument("solve: singular triangular matrix");
            x[i] /= a(i, i);
        }
        return x;
    }
    Matrix m = a;
    Vector x(b);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(m(i, k)) > std::fabs(m(piv, k))) piv = i;
        if (m(piv, k) == 0.0) throw std::invalid_argument("solve: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            std::swap(x[k], x[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
            x[i] -= f * x[k];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= m(i, j) * x[j];
        x[i] /= m(i, i);
    }
    return x;
}

SpectralDecomposition sym_eig(const Matrix& s) {
    require_symmetric(s);
    const int n = s.rows();
    if (n > 128) throw std::invalid_argument("sym_eig: order > 128 unsupported");

    Matrix a = s;
    Matrix v = Matrix::identity(n);
    const double tol = 1e-12 * std::max(frobenius(s), 1e-300);

    for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= tol / (n * n)) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        out.eigenvalues[k] = a(src, src);
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            const double mag = std::fabs(v(i, src));
            if (mag > best) { best = mag; arg = i; }
        }
        const double sign = (v(arg, src) < 0.0) ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.eigenvectors(i, k) = sign * v(i, src);
    }
    return out;
}

Matrix cholesky(const Matrix& s) {
    require_symmetric(s);
    const int n = s.rows();
    Matrix l(n, n);
    for (int j = 0; j < n; ++j) {
        double diag = s(j, j);
        for (int k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
        if (diag <= 0.0)
            throw NotPositiveDefinite("cholesky: nonpositive pivot at index " + std::to_string(j));
        l(j, j) = std::sqrt(diag);
        for (int i = j + 1; i < n; ++i) {
            double acc = s(i, j);
            for (int k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
            l(i, j) = acc / l(j, j);
        }
    }
    return l;
}

Matrix reverse_cholesky(const Matrix& s) {
    const int n = s.rows();
    Matrix rev(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rev(i, j) = s(n - 1 - i, n - 1 - j);
    const Matrix l = cholesky(rev);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = l(n - 1 - i, n - 1 - j);
    return a;
}

std::string to_string(ConstructionKind kind) {
    switch (kind) {
        case ConstructionKind::Standard: return "standard";
        case ConstructionKind::Pca: return "pca";
        case ConstructionKind::Cholesky: return "cholesky";
        case ConstructionKind::Rotated: return "rotated";
    }
    return "?";
}

Matrix bm_covariance(int d, double dt) {
    Matrix sigma(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sigma(i, j) = dt * static_cast<double>(std::min(i, j) + 1);
    return sigma;
}

PathConstruction bm_construction(int d, double dt, ConstructionKind kind) {
    if (d < 1 || dt <= 0.0) throw std::invalid_argument("bm_construction: need d >= 1, dt > 0");
    PathConstruction pc;
    pc.sigma = bm_covariance(d, dt);
    pc.kind = kind;
    switch (kind) {
        case ConstructionKind::Standard: {
            pc.r = Matrix(d, d);
            const double sq = std::sqrt(dt);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j <= i; ++j) pc.r(i, j) = sq;
            return pc;
        }
        case ConstructionKind::Pca: {
            PathConstruction p = pca_construction(pc.sigma);
            p.kind = ConstructionKind::Pca;
            return p;
        }
        default:
            throw std::invalid_argument("bm_construction: unknown kind");
    }
}

PathConstruction cholesky_construction(const Matrix& sigma) {
    PathConstruction pc;
    pc.sigma = sigma;
    pc.kind = ConstructionKind::Cholesky;
    pc.r = cholesky(sigma);
    return pc;
}

PathConstruction pca_construction(const Matrix& sigma) {
    PathConstruction pc;
    pc.sigma = sigma;
    pc.kind = ConstructionKind::Pca;
    const SpectralDecomposition eig = sym_eig(sigma);
    const int d = sigma.rows();
    pc.r = Matrix(d, d);
    for (int k = 0; k < d; ++k) {
        const double lam = eig.eigenvalues[k];
        if (lam < -1e-10 * std::fabs(eig.eigenvalues[0]))
            throw NotPositiveDefinite("pca_construction: negative eigenvalue");
        const double scale = std::sqrt(std::max(lam, 0.0));
        for (int i = 0; i < d; ++i) pc.r(i, k) = scale * eig.eigenvectors(i, k);
    }
    // First column componentwise nonnegative (flip the global sign if needed).
    double pos = 0.0, neg = 0.0;
    for (int i = 0; i < d; ++i) {
        pos += std::max(pc.r(i, 0), 0.0);
        neg += std::max(-pc.r(i, 0), 0.0);
    }
    if (neg > pos)
        for (int i = 0; i < d; ++i) pc.r(i, 0) = -pc.r(i, 0);
    return pc;
}

PathConstruction rotate_construction(const PathConstruction& base, const Matrix& u) {
    PathConstruction pc;
    pc.sigma = base.sigma;
    pc.kind = ConstructionKind::Rotated;
    pc.r = matmul(base.r, u);
    return pc;
}

Matrix householder_complement(const Vector& u1) {
    const int d = static_cast<int>(u1.size());
    if (d < 2) throw std::invalid_argument("householder_complement: need dimension >= 2");
    if (std::fabs(norm2(u1) - 1.0) > 1e-10)
        throw std::invalid_argument("householder_complement: u1 is not a unit vector");

    Vector w(u1);
    w[0] -= 1.0;
    const double nw2 = dot(w, w);
    Matrix v(d, d - 1);
    if (std::sqrt(nw2) < 1e-12) {
        for (int j = 1; j < d; ++j) v(j, j - 1) = 1.0;
        return v;
    }
    const double scale = 2.0 / nw2;
    for (int i = 0; i < d; ++i)
        for (int j = 1; j < d; ++j) v(i, j - 1) = (i == j ? 1.0 : 0.0) - scale * w[i] * w[j];
    return v;
}

} // namespace cas::linalg
