#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cas::linalg {

using Vector = std::vector<double>;

// Dense row-major matrix, value semantics. Sized for the library's needs
// (orders up to a few hundred), not for general-purpose BLAS work.
class Matrix {
  public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols),
        a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    Vector column(int j) const;
    void set_column(int j, const Vector& v);

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Vector matvec(const Matrix& a, const Vector& x);
double max_abs_diff(const Matrix& a, const Matrix& b);
double dot(const Vector& a, const Vector& b);
double norm2(const Vector& a);

// Solve A x = b by Gaussian elimination with partial pivoting; uses plain
// forward substitution when A is lower-triangular.
Vector solve(const Matrix& a, const Vector& b);

struct SpectralDecomposition {
    Vector eigenvalues;  // descending
    Matrix eigenvectors; // column k pairs with eigenvalue k; orthogonal
};

// Cyclic Jacobi eigendecomposition for symmetric S (order <= 128).
// Column signs follow the convention: the largest-magnitude entry of each
// eigenvector is positive, lowest index breaking ties.
SpectralDecomposition sym_eig(const Matrix& s);

// Lower-triangular L with L L^T = S; throws NotPositiveDefinite on a
// nonpositive pivot.
Matrix cholesky(const Matrix& s);

// Upper-triangular A with A A^T = S (Cholesky under index reversal), so the
// first input coordinate loads only on the first output coordinate.
Matrix reverse_cholesky(const Matrix& s);

enum class ConstructionKind { Standard, Pca, Cholesky, Rotated };

std::string to_string(ConstructionKind kind);

// A square root R of a covariance matrix, R R^T = Sigma.
struct PathConstruction {
    Matrix r;
    ConstructionKind kind = ConstructionKind::Standard;
    Matrix sigma;
};

// Discrete Brownian covariance Sigma_ij = dt * min(i+1, j+1).
Matrix bm_covariance(int d, double dt);

// Standard (forward-increment) or PCA square root of the Brownian
// covariance. PCA columns are sqrt(eigenvalue)-scaled eigenvectors with the
// first column sign-fixed componentwise nonnegative.
PathConstruction bm_construction(int d, double dt, ConstructionKind kind);

PathConstruction cholesky_construction(const Matrix& sigma);
PathConstruction pca_construction(const Matrix& sigma);

// R <- base.R * u; records the rotated tag and keeps Sigma.
PathConstruction rotate_construction(const PathConstruction& base, const Matrix& u);

// Columns 2..d of the Householder reflection H = I - 2ww^T mapping e1 to u1,
// i.e. an orthonormal basis of the complement of the unit vector u1.
// Degenerate case u1 ~ e1 returns columns 2..d of the identity.
Matrix householder_complement(const Vector& u1);

} // namespace cas::linalg
