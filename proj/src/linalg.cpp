#include "pcss/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcss {

void require_finite(const Matrix& a, const std::string& context) {
    if (!a.allFinite()) {
        for (Index j = 0; j < a.cols(); ++j) {
            for (Index i = 0; i < a.rows(); ++i) {
                if (!std::isfinite(a(i, j))) {
                    std::ostringstream msg;
                    msg << context << ": non-finite entry at row " << i
                        << ", column " << j;
                    throw ValidationError(msg.str());
                }
            }
        }
    }
}

namespace {

Index rank_from_values(const Vector& s, Index rows, Index cols) {
    if (s.size() == 0) return 0;
    const double cutoff = rank_cutoff(rows, cols, s(0));
    Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    return rank;
}

} // namespace

SvdFactors svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw DimensionError("svd: matrix is empty");
    }
    Eigen::JacobiSVD<Matrix> backend(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (backend.info() != Eigen::Success) {
        throw ConvergenceError("svd: backend failed to converge");
    }
    SvdFactors f;
    f.u = backend.matrixU();
    f.singular_values = backend.singularValues();
    f.vt = backend.matrixV().transpose();
    f.numerical_rank = rank_from_values(f.singular_values, a.rows(), a.cols());
    return f;
}

Vector singular_values(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw DimensionError("singular_values: matrix is empty");
    }
    Eigen::JacobiSVD<Matrix> backend(a);
    if (backend.info() != Eigen::Success) {
        throw ConvergenceError("singular_values: backend failed to converge");
    }
    return backend.singularValues();
}

Index numerical_rank(const Matrix& a) {
    const Vector s = singular_values(a);
    return rank_from_values(s, a.rows(), a.cols());
}

Matrix truncated_left_basis(const Matrix& a, Index d) {
    if (d < 1 || d > std::min(a.rows(), a.cols())) {
        std::ostringstream msg;
        msg << "truncated_left_basis: d = " << d << " outside [1, "
            << std::min(a.rows(), a.cols()) << "]";
        throw ParameterError(msg.str());
    }
    return svd(a).u.leftCols(d);
}

Matrix best_rank_r(const Matrix& a, Index r) {
    if (r < 1 || r > std::min(a.rows(), a.cols())) {
        std::ostringstream msg;
        msg << "best_rank_r: r = " << r << " outside [1, "
            << std::min(a.rows(), a.cols()) << "]";
        throw ParameterError(msg.str());
    }
    const SvdFactors f = svd(a);
    return f.u.leftCols(r) * f.singular_values.head(r).asDiagonal() * f.vt.topRows(r);
}

double tail_norm(const SvdFactors& f, Index r) {
    const Index p = f.singular_values.size();
    if (r >= p) return 0.0;
    return f.singular_values.tail(p - r).norm();
}

QrFactors qr_factor(const Matrix& a, const Tolerances& tol) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw DimensionError("qr_factor: matrix is empty");
    }
    if (a.cols() > a.rows()) {
        throw RankError("qr_factor: more columns than rows cannot have full column rank");
    }
    Eigen::HouseholderQR<Matrix> backend(a);
    QrFactors f;
    f.q = backend.householderQ() * Matrix::Identity(a.rows(), a.cols());
    f.r_upper = backend.matrixQR()
                    .topRows(a.cols())
                    .template triangularView<Eigen::Upper>();
    const double scale = tol.qr_rank * spectral_norm(a);
    for (Index j = 0; j < f.r_upper.cols(); ++j) {
        if (std::abs(f.r_upper(j, j)) < scale) {
            std::ostringstream msg;
            msg << "qr_factor: numerically rank-deficient input (|R(" << j << ","
                << j << ")| = " << std::abs(f.r_upper(j, j)) << " < " << scale << ")";
            throw RankError(msg.str());
        }
    }
    return f;
}

Matrix project_out(const Matrix& q, const Matrix& b) {
    if (q.cols() == 0) return b;
    if (q.rows() != b.rows()) {
        throw DimensionError("project_out: row counts differ");
    }
    return b - q * (q.transpose() * b);
}

double residual_norm_sq(const Matrix& u, const Vector& x, const Tolerances& tol) {
    if (u.cols() > 0 && u.rows() != x.size()) {
        throw DimensionError("residual_norm_sq: row counts differ");
    }
    const double total = x.squaredNorm();
    const double captured = u.cols() == 0 ? 0.0 : (u.transpose() * x).squaredNorm();
    double d = total - captured;
    if (d < 0.0) {
        if (d < -tol.residual_clamp * std::max(1.0, total)) {
            // basis not orthonormal enough to trust the stabilized form
            throw ParameterError("residual_norm_sq: negative residual beyond clamp");
        }
        d = 0.0;
    }
    return d;
}

double spectral_norm(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw DimensionError("spectral_norm: matrix is empty");
    }
    return singular_values(a)(0);
}

double pinv_norm(const Matrix& a) {
    const Vector s = singular_values(a);
    const Index rank = rank_from_values(s, a.rows(), a.cols());
    if (rank < a.cols()) {
        throw RankError("pinv_norm: input is numerically rank-deficient");
    }
    return 1.0 / s(a.cols() - 1);
}

Matrix gather_columns(const Matrix& a, const std::vector<Index>& indices) {
    Matrix c(a.rows(), static_cast<Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] < 0 || indices[j] >= a.cols()) {
            throw ParameterError("gather_columns: index out of range");
        }
        c.col(static_cast<Index>(j)) = a.col(indices[j]);
    }
    return c;
}

} // namespace pcss
