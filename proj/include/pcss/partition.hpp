#pragma once

//
// Lloyd-style column partitioning: alternate exact centroid updates with
// Voronoi reassignment of columns under the projection-residual distance,
// tracking the energy functional to convergence. Two centroid update
// rules are provided: fixed per-set dimensions (CVOD) and a global top-r
// allocation of pooled singular values that lets the number of sets
// shrink (adaptCVOD).
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcss/linalg.hpp"
#include "pcss/tolerances.hpp"

namespace pcss {

struct Partition {
    std::vector<std::vector<Index>> sets; // disjoint cover of {0..n-1}
    std::vector<Matrix> centroids;        // m x dims[i], orthonormal columns
    std::vector<Index> dims;              // actual centroid dimensions

    Index k() const { return static_cast<Index>(sets.size()); }
};

struct LloydTrace {
    std::vector<double> energies;   // one value per iteration
    Index iterations = 0;
    bool converged = false;
    std::vector<Index> k_history;   // set count per iteration
    Index clamp_events = 0;         // centroid dims clamped to the set's rank
    Index repair_events = 0;        // empty sets repaired (CVOD) or dropped (adapt)
};

enum class InitKind {
    random_balanced, // shuffle columns, split into k near-equal sets
    random_uniform,  // each column assigned independently
    provided,        // caller supplies the initial sets
};

struct PartitionConfig {
    Index k = 1;
    Index r = 1;
    std::optional<std::vector<Index>> dims; // fixed-dims rule only; sums to r
    double epsilon = 1e-8;                  // energy-improvement stop threshold
    Index max_iters = 100;
    InitKind init = InitKind::random_balanced;
    std::uint64_t seed = 0;
    std::optional<std::vector<std::vector<Index>>> initial_sets; // init == provided
    bool relative_epsilon = false; // compare delta / previous energy instead
    int threads = 1;               // per-set SVDs run concurrently when > 1
};

// floor(r/k) per set, remainder distributed one each to the first sets.
std::vector<Index> default_dims(Index r, Index k);

// Sum over all columns of the squared projection residual against their
// set's centroid.
double energy(const Matrix& a, const Partition& p, const Tolerances& tol = {});

// Assign every column of a to the centroid with the smallest projection
// residual; ties go to the smallest centroid index. Sets may come back
// empty; callers repair or drop them.
std::vector<std::vector<Index>> find_voronoi_sets(const Matrix& a,
                                                  const std::vector<Matrix>& centroids,
                                                  const Tolerances& tol = {});

// Per-set top-d_i left singular bases. dims are clamped to each set's
// numerical rank; clamp_count (when given) receives the number of sets
// clamped. Throws DegenerateSetError on an empty set.
std::vector<Matrix> update_centroids_fixed(const Matrix& a,
                                           const std::vector<std::vector<Index>>& sets,
                                           const std::vector<Index>& dims,
                                           int threads = 1,
                                           Index* clamp_count = nullptr);

struct AdaptUpdate {
    std::vector<Matrix> centroids;      // for surviving sets only
    std::vector<Index> dims;            // per surviving set; sums to r
    std::vector<std::size_t> survivors; // indices into the input sets
};

// Pools the singular values of all sets, keeps the global top r, and
// allocates each set the left singular vectors whose values were kept.
// Sets receiving none are dropped. Throws RankError when the pooled
// numerical rank is below r.
AdaptUpdate update_centroids_adapt(const Matrix& a,
                                   const std::vector<std::vector<Index>>& sets,
                                   Index r, int threads = 1);

struct LloydResult {
    Partition partition;
    LloydTrace trace;
};

LloydResult run_cvod(const Matrix& a, const PartitionConfig& config,
                     const Tolerances& tol = {});
LloydResult run_adapt_cvod(const Matrix& a, const PartitionConfig& config,
                           const Tolerances& tol = {});

// Single-set partition carrying the top-r left basis of a; the degenerate
// k = 1 case used when no partitioning algorithm is requested.
Partition trivial_partition(const Matrix& a, Index r);

enum class PartitionAlgorithm { none, cvod, adapt_cvod };

const char* partition_algorithm_name(PartitionAlgorithm alg);
PartitionAlgorithm parse_partition_algorithm(const std::string& text);

// Dispatch: none yields the trivial partition with an empty trace.
LloydResult run_partition_algorithm(const Matrix& a, PartitionAlgorithm alg,
                                    const PartitionConfig& config,
                                    const Tolerances& tol = {});

// Disjoint-cover and shape validation; throws on violation.
void validate_partition(const Matrix& a, const Partition& p);

} // namespace pcss
