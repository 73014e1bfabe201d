#pragma once

//
// Post-processing of a column partition into a CSSP solution: process the
// Voronoi sets in ascending centroid-rank order, select from each set's
// residual against the columns already chosen, and assemble the full-rank
// matrix C. Also assembles two-sided CUR factorizations by running the
// same machinery on the transpose.
//

#include <string>
#include <vector>

#include "pcss/partition.hpp"
#include "pcss/selectors.hpp"

namespace pcss {

struct PerSetSelection {
    std::size_t set;           // index into Partition::sets
    std::vector<Index> local;  // positions within that set's column list
    std::vector<Index> global; // column indices into the parent matrix
};

struct PipelineResult {
    std::vector<Index> global_indices; // in selection order
    Matrix c;                          // the selected columns
    std::vector<PerSetSelection> per_set;
    Index r_achieved = 0;              // c.cols(); below the request only
                                       // when a residual block ran out of rank
    std::vector<std::string> warnings; // rank reductions logged here
};

// Selector rank failures on a projected block reduce that set's allocation
// to the block's numerical rank when strict is false, and abort with
// RankError when strict is true.
PipelineResult partitioned_cssp(const Matrix& a, const Partition& p,
                                const SelectorSpec& spec, bool strict = false,
                                const Tolerances& tol = {});

// ||A - Q(Q^T A)||_F with QR = c; c must have full column rank.
double id_error(const Matrix& a, const Matrix& c, const Tolerances& tol = {});

struct CurConfig {
    PartitionAlgorithm algorithm = PartitionAlgorithm::cvod;
    PartitionConfig partition;
    bool strict = false;
};

struct CurResult {
    Matrix c;                        // m x r_c selected columns
    Matrix u;                        // r_c x r_r core, C^+ A R^+
    Matrix r;                        // r_r x n selected rows
    std::vector<Index> column_indices;
    std::vector<Index> row_indices;
    double reconstruction_error = 0.0;

    // Everything the bound checks need about the two runs.
    Partition column_partition;
    Partition row_partition; // over the columns of A^T
    PipelineResult column_run;
    PipelineResult row_run;  // on A^T
};

// Runs the partition algorithm and selector on A for columns and on A^T
// for rows (same config and seed), then solves the nested least-squares
// problem for the core.
CurResult build_cur(const Matrix& a, const SelectorSpec& spec, const CurConfig& config,
                    const Tolerances& tol = {});

} // namespace pcss
