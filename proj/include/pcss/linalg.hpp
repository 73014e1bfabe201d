#pragma once

//
// Dense linear-algebra primitives shared by every other module: SVD,
// truncated bases, QR, projection residuals and norms. Matrices are
// column-major real doubles (Eigen::MatrixXd); entries entering the
// system from files or generators are validated finite.
//

#include <string>

#include <Eigen/Dense>

#include "pcss/errors.hpp"
#include "pcss/tolerances.hpp"

namespace pcss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Throws ValidationError if any entry is NaN or Inf. Call sites are the
// boundaries where data enters the system (file I/O, generators).
void require_finite(const Matrix& a, const std::string& context);

// Thin SVD a = u * diag(singular_values) * vt.
struct SvdFactors {
    Matrix u;               // m x p, orthonormal columns
    Vector singular_values; // length p, nonincreasing
    Matrix vt;              // p x n, orthonormal rows
    Index numerical_rank = 0;

    // Right singular vectors as columns (n x p).
    Matrix v() const { return vt.transpose(); }
};

// Thin QR a = q * r_upper for a with full column rank.
struct QrFactors {
    Matrix q;       // m x r, orthonormal columns
    Matrix r_upper; // r x r, upper triangular
};

SvdFactors svd(const Matrix& a);

// Singular values only (cheaper when no bases are needed).
Vector singular_values(const Matrix& a);

Index numerical_rank(const Matrix& a);

// Top-d left singular vectors of a (m x d, orthonormal columns).
Matrix truncated_left_basis(const Matrix& a, Index d);

// Best rank-r approximation A_r = U_r S_r W_r^T.
Matrix best_rank_r(const Matrix& a, Index r);

// ||A - A_r||_F from the tail singular values of a precomputed SVD.
double tail_norm(const SvdFactors& f, Index r);

QrFactors qr_factor(const Matrix& a, const Tolerances& tol = {});

// (I - QQ^T) B for Q with orthonormal columns; Q may have zero columns,
// in which case B is returned unchanged.
Matrix project_out(const Matrix& q, const Matrix& b);

// ||x||^2 - ||U^T x||^2, clamped to zero from slightly below. The m x m
// projector is never formed.
double residual_norm_sq(const Matrix& u, const Vector& x, const Tolerances& tol = {});

double spectral_norm(const Matrix& a);

// ||A^+||_2 = 1 / sigma_min(a); a must have full column rank.
double pinv_norm(const Matrix& a);

// Columns of a at the given indices, in order.
Matrix gather_columns(const Matrix& a, const std::vector<Index>& indices);

} // namespace pcss
