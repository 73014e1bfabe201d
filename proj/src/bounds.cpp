#include "pcss/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pcss {

namespace {

BoundReport make_report(std::string name, double lhs, double rhs, const Tolerances& tol) {
    BoundReport report;
    report.name = std::move(name);
    report.lhs = lhs;
    report.rhs = rhs;
    report.slack = rhs - lhs;
    report.satisfied = report.slack >= -tol.bound_slack * std::max(1.0, rhs);
    return report;
}

void require_orthonormal(const Matrix& q, const Tolerances& tol, const char* who) {
    const Matrix gram = q.transpose() * q;
    const double defect = (gram - Matrix::Identity(q.cols(), q.cols())).norm();
    if (defect > tol.orthonormality * std::max<double>(1.0, std::sqrt(q.cols()))) {
        throw ParameterError(std::string(who) + ": input columns are not orthonormal");
    }
}

// Orthonormal basis of the complement of range(q) in R^n.
Matrix complement_basis(const Matrix& q) {
    const Index n = q.rows();
    const Index k = q.cols();
    Eigen::HouseholderQR<Matrix> full(q);
    const Matrix whole = full.householderQ() * Matrix::Identity(n, n);
    return whole.rightCols(n - k);
}

// Selected columns of one set, empty when the pipeline took nothing there.
Matrix set_selection(const Matrix& a, const PipelineResult& result, std::size_t set) {
    for (const PerSetSelection& entry : result.per_set) {
        if (entry.set == set) return gather_columns(a, entry.global);
    }
    return Matrix(a.rows(), 0);
}

double zeta_factor(const Matrix& a, const Partition& p, const PipelineResult& result) {
    if (result.per_set.empty()) {
        throw ParameterError("bounds: pipeline result carries no per-set data");
    }
    double zeta = 1.0; // an empty selection contributes the neutral factor
    for (std::size_t i = 0; i < p.sets.size(); ++i) {
        const Matrix ci = set_selection(a, result, i);
        if (ci.cols() == 0) continue;
        const Matrix vi = gather_columns(a, p.sets[i]);
        zeta = std::max(zeta, 1.0 + pinv_norm(ci) * spectral_norm(vi));
    }
    return zeta;
}

// max_i ||(I - C_i C_i^+) V_i||_F^2 / sigma_rho^2 over the sets of p.
double gamma_factor(const Matrix& a, const Partition& p, const PipelineResult& result,
                    double sigma_rho, const Tolerances& tol) {
    double worst = 0.0;
    for (std::size_t i = 0; i < p.sets.size(); ++i) {
        const Matrix vi = gather_columns(a, p.sets[i]);
        const Matrix ci = set_selection(a, result, i);
        double residual_sq;
        if (ci.cols() == 0) {
            residual_sq = vi.squaredNorm();
        } else {
            residual_sq = project_out(qr_factor(ci, tol).q, vi).squaredNorm();
        }
        worst = std::max(worst, residual_sq);
    }
    return worst / (sigma_rho * sigma_rho);
}

Index covering_factor(const Partition& p, Index r) {
    Index l_star = 1;
    for (const Index d : p.dims) {
        if (d < 1) throw ParameterError("bounds: partition carries a zero-dimensional centroid");
        l_star = std::max(l_star, (r + d - 1) / d);
    }
    return l_star;
}

struct EnergyRhs {
    double value;
    double tail;
    double head_sq;
    Index l_star;
};

EnergyRhs energy_bound_rhs(const SvdFactors& f, const Partition& p, Index r) {
    EnergyRhs out;
    out.l_star = covering_factor(p, r);
    out.tail = tail_norm(f, r);
    out.head_sq = f.singular_values.head(std::min<Index>(r, f.singular_values.size()))
                      .squaredNorm();
    out.value = out.tail * out.tail +
                (1.0 - 1.0 / static_cast<double>(out.l_star)) * out.head_sq;
    return out;
}

} // namespace

BoundReport check_subspace_distance(const Matrix& w1, const Matrix& z1,
                                    const Tolerances& tol) {
    if (w1.rows() != z1.rows() || w1.cols() != z1.cols()) {
        throw DimensionError("check_subspace_distance: shapes differ");
    }
    if (w1.cols() < 1 || w1.cols() >= w1.rows()) {
        throw ParameterError("check_subspace_distance: need 1 <= k < n");
    }
    require_orthonormal(w1, tol, "check_subspace_distance");
    require_orthonormal(z1, tol, "check_subspace_distance");

    const Matrix w2 = complement_basis(w1);
    const Matrix z2 = complement_basis(z1);

    // In the Frobenius norm the projector difference splits over both
    // off-diagonal blocks, so the cross terms carry a sqrt(2):
    //   ||W1 W1^T - Z1 Z1^T||_F = sqrt(2) ||W1^T Z2||_F = sqrt(2) ||Z1^T W2||_F.
    // (The sqrt(2)-free form holds in the spectral norm only.)
    const double projector_diff =
        (w1 * w1.transpose() - z1 * z1.transpose()).norm();
    const double cross_wz = (w1.transpose() * z2).norm();
    const double cross_zw = (z1.transpose() * w2).norm();

    const double q1 = projector_diff;
    const double q2 = std::numbers::sqrt2 * cross_wz;
    const double q3 = std::numbers::sqrt2 * cross_zw;

    const double largest = std::max({q1, q2, q3});
    const double discrepancy = largest - std::min({q1, q2, q3});

    BoundReport report;
    report.name = "subspace_distance_identity";
    report.lhs = discrepancy;
    report.rhs = 1e-9 * std::max(1.0, largest);
    report.slack = report.rhs - report.lhs;
    report.satisfied = report.slack >= 0.0;
    report.ingredients["projector_diff"] = projector_diff;
    report.ingredients["cross_wz"] = cross_wz;
    report.ingredients["cross_zw"] = cross_zw;
    return report;
}

BoundReport check_projection_lemma(const Matrix& a, const Matrix& c, Index r,
                                   const Tolerances& tol) {
    if (a.rows() != c.rows()) {
        throw DimensionError("check_projection_lemma: row counts differ");
    }
    if (c.cols() != r) {
        throw ParameterError("check_projection_lemma: c must have exactly r columns");
    }
    const SvdFactors f = svd(a);
    if (r < 1 || r > std::min(a.rows(), a.cols())) {
        throw ParameterError("check_projection_lemma: r out of range");
    }
    const Matrix ur = f.u.leftCols(r);
    const QrFactors qr = qr_factor(c, tol);

    // ||U_r U_r^T - QQ^T||_F = sqrt(2) ||(I - U_r U_r^T) Q||_F; evaluating
    // the residual block directly avoids the cancellation in 2r - 2||U_r^T Q||^2
    // when the subspaces nearly coincide, and never forms an m x m projector.
    const double lhs = std::numbers::sqrt2 * project_out(ur, qr.q).norm();

    // The Frobenius projector distance is sqrt(2) times the single cross
    // block it is bounded through, hence the sqrt(2) on the right side.
    const double tail = tail_norm(f, r);
    const double c_pinv = pinv_norm(c);
    BoundReport report =
        make_report("projection_lemma", lhs, std::numbers::sqrt2 * tail * c_pinv, tol);
    report.ingredients["tail_error"] = tail;
    report.ingredients["c_pinv_norm"] = c_pinv;
    return report;
}

BoundReport check_id_vs_energy(const Matrix& a, const Partition& p,
                               const PipelineResult& result, const Tolerances& tol) {
    const double zeta = zeta_factor(a, p, result);
    const double g = energy(a, p, tol);
    const double err = id_error(a, result.c, tol);
    BoundReport report = make_report("id_vs_energy", err * err, zeta * zeta * g, tol);
    report.ingredients["zeta"] = zeta;
    report.ingredients["energy"] = g;
    report.ingredients["id_error"] = err;
    return report;
}

BoundReport check_energy_bound(const Matrix& a, const Partition& p, Index r,
                               const Tolerances& tol) {
    const double g = energy(a, p, tol);
    const SvdFactors f = svd(a);
    const EnergyRhs rhs = energy_bound_rhs(f, p, r);
    BoundReport report = make_report("energy_bound", g, rhs.value, tol);
    report.ingredients["energy"] = g;
    report.ingredients["l_star"] = static_cast<double>(rhs.l_star);
    report.ingredients["tail_error"] = rhs.tail;
    report.ingredients["head_energy"] = rhs.head_sq;
    return report;
}

BoundReport check_combined_bound(const Matrix& a, const Partition& p,
                                 const PipelineResult& result, Index r,
                                 const Tolerances& tol) {
    const double zeta = zeta_factor(a, p, result);
    const SvdFactors f = svd(a);
    const EnergyRhs rhs = energy_bound_rhs(f, p, r);
    const double err = id_error(a, result.c, tol);
    BoundReport report =
        make_report("combined_id_bound", err, zeta * std::sqrt(rhs.value), tol);
    report.ingredients["zeta"] = zeta;
    report.ingredients["l_star"] = static_cast<double>(rhs.l_star);
    report.ingredients["tail_error"] = rhs.tail;
    report.ingredients["energy"] = energy(a, p, tol);
    return report;
}

BoundReport check_worst_block_bound(const Matrix& a, const Partition& p,
                               const PipelineResult& result, Index r,
                               const Tolerances& tol) {
    const SvdFactors f = svd(a);
    const Index rho = f.numerical_rank;
    if (rho < 1) throw RankError("check_worst_block_bound: matrix is numerically zero");
    const double sigma_rho = f.singular_values(rho - 1);
    const double gamma_c = gamma_factor(a, p, result, sigma_rho, tol);
    const double tail = tail_norm(f, r);
    const double k_tilde = static_cast<double>(p.k());

    BoundReport report = make_report(
        "worst_block_bound", id_error(a, result.c, tol), std::sqrt(k_tilde * gamma_c) * tail, tol);
    report.ill_conditioned = sigma_rho < tol.conditioning * f.singular_values(0);
    report.ingredients["gamma_c"] = gamma_c;
    report.ingredients["k_tilde"] = k_tilde;
    report.ingredients["sigma_rho"] = sigma_rho;
    report.ingredients["tail_error"] = tail;
    return report;
}

BoundReport check_cur_bound(const Matrix& a, const CurResult& cur, Index r,
                            const Tolerances& tol) {
    const SvdFactors f = svd(a);
    const Index rho = f.numerical_rank;
    if (rho < 1) throw RankError("check_cur_bound: matrix is numerically zero");
    const double sigma_rho = f.singular_values(rho - 1);

    const double gamma_c =
        gamma_factor(a, cur.column_partition, cur.column_run, sigma_rho, tol);
    const Matrix at = a.transpose();
    const double gamma_r =
        gamma_factor(at, cur.row_partition, cur.row_run, sigma_rho, tol);

    const double k1 = static_cast<double>(cur.column_partition.k());
    const double k2 = static_cast<double>(cur.row_partition.k());
    const double tail = tail_norm(f, r);
    const double rhs = (std::sqrt(k1 * gamma_c) + std::sqrt(k2 * gamma_r)) * tail;

    BoundReport report = make_report("cur_bound", cur.reconstruction_error, rhs, tol);
    report.ill_conditioned = sigma_rho < tol.conditioning * f.singular_values(0);
    report.ingredients["gamma_c"] = gamma_c;
    report.ingredients["gamma_r"] = gamma_r;
    report.ingredients["k1"] = k1;
    report.ingredients["k2"] = k2;
    report.ingredients["sigma_rho"] = sigma_rho;
    report.ingredients["tail_error"] = tail;
    return report;
}

} // namespace pcss
