#include "pcss/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pcss {

PipelineResult partitioned_cssp(const Matrix& a, const Partition& p,
                                const SelectorSpec& spec, bool strict,
                                const Tolerances& tol) {
    validate_partition(a, p);

    // Ascending centroid rank; equal ranks keep the original set order.
    std::vector<std::size_t> order(p.sets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return p.dims[l] < p.dims[r];
    });

    PipelineResult out;
    out.c.resize(a.rows(), 0);

    for (const std::size_t idx : order) {
        const Index want = p.dims[idx];
        if (want == 0) continue;
        const Matrix block = gather_columns(a, p.sets[idx]);

        // Select from the block's residual against everything chosen so far;
        // the first set is taken as-is.
        Matrix residual;
        if (out.c.cols() == 0) {
            residual = block;
        } else {
            residual = project_out(qr_factor(out.c, tol).q, block);
        }

        Index take = want;
        const Index available = numerical_rank(residual);
        if (available < want) {
            if (strict) {
                std::ostringstream msg;
                msg << "partitioned_cssp: set " << idx << " offers rank " << available
                    << " after projection, " << want << " requested";
                throw RankError(msg.str());
            }
            std::ostringstream note;
            note << "set " << idx << ": allocation reduced " << want << " -> "
                 << available << " (projected block rank)";
            out.warnings.push_back(note.str());
            take = available;
        }
        if (take == 0) continue;

        const ColumnSelection sel = select(spec, residual, take, tol);

        PerSetSelection entry;
        entry.set = idx;
        entry.local = sel.indices;
        const Index old_cols = out.c.cols();
        out.c.conservativeResize(Eigen::NoChange, old_cols + take);
        for (Index t = 0; t < take; ++t) {
            const Index global = p.sets[idx][static_cast<std::size_t>(sel.indices[static_cast<std::size_t>(t)])];
            entry.global.push_back(global);
            out.global_indices.push_back(global);
            out.c.col(old_cols + t) = a.col(global); // original, unprojected column
        }
        out.per_set.push_back(std::move(entry));
    }

    if (out.c.cols() == 0) {
        throw RankError("partitioned_cssp: no columns could be selected");
    }
    out.r_achieved = out.c.cols();
    return out;
}

double id_error(const Matrix& a, const Matrix& c, const Tolerances& tol) {
    if (a.rows() != c.rows()) {
        throw DimensionError("id_error: row counts differ");
    }
    const QrFactors f = qr_factor(c, tol); // rejects rank-deficient c
    return (a - f.q * (f.q.transpose() * a)).norm();
}

CurResult build_cur(const Matrix& a, const SelectorSpec& spec, const CurConfig& config,
                    const Tolerances& tol) {
    CurResult out;

    const LloydResult cols = run_partition_algorithm(a, config.algorithm,
                                                     config.partition, tol);
    out.column_partition = cols.partition;
    out.column_run = partitioned_cssp(a, out.column_partition, spec, config.strict, tol);
    out.c = out.column_run.c;
    out.column_indices = out.column_run.global_indices;

    const Matrix at = a.transpose();
    const LloydResult rows = run_partition_algorithm(at, config.algorithm,
                                                     config.partition, tol);
    out.row_partition = rows.partition;
    out.row_run = partitioned_cssp(at, out.row_partition, spec, config.strict, tol);
    out.row_indices = out.row_run.global_indices;
    out.r = out.row_run.c.transpose(); // selected rows of a

    // Core: U = C^+ A R^+ through two least-squares solves.
    const Matrix x = out.c.completeOrthogonalDecomposition().solve(a); // r_c x n
    out.u = out.row_run.c.completeOrthogonalDecomposition()
                .solve(x.transpose())
                .transpose(); // r_c x r_r
    out.reconstruction_error = (a - out.c * out.u * out.r).norm();
    return out;
}

} // namespace pcss
