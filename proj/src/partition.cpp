#include "pcss/partition.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <numeric>
#include <sstream>

#include "pcss/rng.hpp"

namespace pcss {

namespace {

void run_over_sets(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::future<void>> tasks;
    tasks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        tasks.push_back(std::async(std::launch::async, body, i));
    }
    for (auto& t : tasks) t.get();
}

std::vector<std::vector<Index>> initial_sets(const Matrix& a, const PartitionConfig& config) {
    const Index n = a.cols();
    std::vector<std::vector<Index>> sets(static_cast<std::size_t>(config.k));
    switch (config.init) {
        case InitKind::random_balanced: {
            std::vector<Index> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), Index{0});
            std::mt19937_64 eng(config.seed);
            shuffle(perm, eng);
            const Index base = n / config.k;
            const Index extra = n % config.k;
            std::size_t cursor = 0;
            for (Index i = 0; i < config.k; ++i) {
                const Index size = base + (i < extra ? 1 : 0);
                for (Index j = 0; j < size; ++j) {
                    sets[static_cast<std::size_t>(i)].push_back(perm[cursor++]);
                }
            }
            break;
        }
        case InitKind::random_uniform: {
            std::mt19937_64 eng(config.seed);
            for (Index j = 0; j < n; ++j) {
                sets[uniform_index(eng, static_cast<std::size_t>(config.k))].push_back(j);
            }
            break;
        }
        case InitKind::provided: {
            if (!config.initial_sets) {
                throw ParameterError("partition init 'provided' needs initial_sets");
            }
            sets = *config.initial_sets;
            if (static_cast<Index>(sets.size()) != config.k) {
                throw ParameterError("provided initial_sets count differs from k");
            }
            std::vector<bool> seen(static_cast<std::size_t>(n), false);
            Index total = 0;
            for (const auto& set : sets) {
                for (const Index j : set) {
                    if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)]) {
                        throw ParameterError("provided initial_sets are not a disjoint cover");
                    }
                    seen[static_cast<std::size_t>(j)] = true;
                    ++total;
                }
            }
            if (total != n) {
                throw ParameterError("provided initial_sets do not cover all columns");
            }
            break;
        }
    }
    return sets;
}

void validate_config(const Matrix& a, const PartitionConfig& config, bool fixed_dims) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw DimensionError("partition: matrix is empty");
    }
    if (config.k < 1 || config.k > a.cols()) {
        throw ParameterError("partition: k must be in [1, n]");
    }
    if (config.r < 1) {
        throw ParameterError("partition: r must be positive");
    }
    if (config.max_iters < 1) {
        throw ParameterError("partition: max_iters must be positive");
    }
    if (!(config.epsilon > 0.0)) {
        throw ParameterError("partition: epsilon must be positive");
    }
    if (config.dims) {
        if (!fixed_dims) {
            throw ParameterError("partition: explicit dims are only valid for the fixed-dims rule");
        }
        if (static_cast<Index>(config.dims->size()) != config.k) {
            throw ParameterError("partition: dims length must equal k");
        }
        Index sum = 0;
        for (const Index d : *config.dims) {
            if (d < 1) throw ParameterError("partition: every dim must be at least 1");
            sum += d;
        }
        if (sum != config.r) {
            throw ParameterError("partition: dims must sum to r");
        }
    }
    const Index rank = numerical_rank(a);
    if (config.r > rank) {
        std::ostringstream msg;
        msg << "partition: r = " << config.r << " exceeds numerical rank " << rank;
        throw RankError(msg.str());
    }
}

// Squared residual of every column against its assigned centroid.
std::vector<double> column_residuals(const Matrix& a,
                                     const std::vector<std::vector<Index>>& sets,
                                     const std::vector<Matrix>& centroids,
                                     const Tolerances& tol) {
    std::vector<double> res(static_cast<std::size_t>(a.cols()), 0.0);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (const Index j : sets[i]) {
            res[static_cast<std::size_t>(j)] =
                residual_norm_sq(centroids[i], a.col(j), tol);
        }
    }
    return res;
}

// Move the worst-represented column into each empty set. Before any
// centroids exist the donor is the largest set's last column.
Index repair_empty_sets(const Matrix& a, std::vector<std::vector<Index>>& sets,
                        const std::vector<Matrix>& centroids, const Tolerances& tol) {
    Index repaired = 0;
    for (std::size_t e = 0; e < sets.size(); ++e) {
        if (!sets[e].empty()) continue;
        std::size_t donor = sets.size();
        std::size_t donor_pos = 0;
        if (centroids.size() == sets.size()) {
            const std::vector<double> res = column_residuals(a, sets, centroids, tol);
            double worst = -1.0;
            for (std::size_t i = 0; i < sets.size(); ++i) {
                if (sets[i].size() < 2) continue;
                for (std::size_t p = 0; p < sets[i].size(); ++p) {
                    const double d = res[static_cast<std::size_t>(sets[i][p])];
                    if (d > worst) {
                        worst = d;
                        donor = i;
                        donor_pos = p;
                    }
                }
            }
        } else {
            std::size_t largest = 0;
            for (std::size_t i = 1; i < sets.size(); ++i) {
                if (sets[i].size() > sets[largest].size()) largest = i;
            }
            if (sets[largest].size() >= 2) {
                donor = largest;
                donor_pos = sets[largest].size() - 1;
            }
        }
        if (donor == sets.size()) {
            throw DegenerateSetError("partition: cannot repair empty set, no donor column");
        }
        sets[e].push_back(sets[donor][donor_pos]);
        sets[donor].erase(sets[donor].begin() + static_cast<std::ptrdiff_t>(donor_pos));
        ++repaired;
    }
    return repaired;
}

void drop_empty_sets(std::vector<std::vector<Index>>& sets) {
    std::erase_if(sets, [](const std::vector<Index>& s) { return s.empty(); });
}

double assignment_energy(const Matrix& a, const std::vector<std::vector<Index>>& sets,
                         const std::vector<Matrix>& centroids, const Tolerances& tol) {
    double total = 0.0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (const Index j : sets[i]) {
            total += residual_norm_sq(centroids[i], a.col(j), tol);
        }
    }
    return total;
}

} // namespace

std::vector<Index> default_dims(Index r, Index k) {
    if (k < 1) throw ParameterError("default_dims: k must be positive");
    if (r < k) {
        std::ostringstream msg;
        msg << "default_dims: r = " << r << " below k = " << k
            << " leaves sets without a dimension";
        throw ParameterError(msg.str());
    }
    std::vector<Index> dims(static_cast<std::size_t>(k), r / k);
    for (Index i = 0; i < r % k; ++i) ++dims[static_cast<std::size_t>(i)];
    return dims;
}

void validate_partition(const Matrix& a, const Partition& p) {
    if (p.sets.empty()) throw ParameterError("partition has no sets");
    if (p.sets.size() != p.centroids.size() || p.sets.size() != p.dims.size()) {
        throw ParameterError("partition: sets/centroids/dims lengths differ");
    }
    std::vector<bool> seen(static_cast<std::size_t>(a.cols()), false);
    Index total = 0;
    for (const auto& set : p.sets) {
        if (set.empty()) {
            throw ParameterError("partition has an empty set (repair or drop it first)");
        }
        for (const Index j : set) {
            if (j < 0 || j >= a.cols() || seen[static_cast<std::size_t>(j)]) {
                throw ParameterError("partition sets are not a disjoint cover");
            }
            seen[static_cast<std::size_t>(j)] = true;
            ++total;
        }
    }
    if (total != a.cols()) {
        throw ParameterError("partition sets do not cover all columns");
    }
    for (std::size_t i = 0; i < p.centroids.size(); ++i) {
        if (p.centroids[i].cols() != p.dims[i] || p.centroids[i].rows() != a.rows()) {
            throw DimensionError("partition centroid shape disagrees with dims");
        }
    }
}

double energy(const Matrix& a, const Partition& p, const Tolerances& tol) {
    validate_partition(a, p);
    return assignment_energy(a, p.sets, p.centroids, tol);
}

std::vector<std::vector<Index>> find_voronoi_sets(const Matrix& a,
                                                  const std::vector<Matrix>& centroids,
                                                  const Tolerances& tol) {
    if (centroids.empty()) {
        throw ParameterError("find_voronoi_sets: no centroids");
    }
    for (const Matrix& u : centroids) {
        if (u.cols() > 0 && u.rows() != a.rows()) {
            throw DimensionError("find_voronoi_sets: centroid row count differs from matrix");
        }
    }
    std::vector<std::vector<Index>> sets(centroids.size());
    for (Index j = 0; j < a.cols(); ++j) {
        const Vector x = a.col(j);
        std::size_t best = 0;
        double best_d = residual_norm_sq(centroids[0], x, tol);
        for (std::size_t i = 1; i < centroids.size(); ++i) {
            const double d = residual_norm_sq(centroids[i], x, tol);
            if (d < best_d) { // strict: ties keep the smallest index
                best_d = d;
                best = i;
            }
        }
        sets[best].push_back(j);
    }
    return sets;
}

std::vector<Matrix> update_centroids_fixed(const Matrix& a,
                                           const std::vector<std::vector<Index>>& sets,
                                           const std::vector<Index>& dims,
                                           int threads, Index* clamp_count) {
    if (sets.size() != dims.size()) {
        throw ParameterError("update_centroids_fixed: dims length differs from sets");
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) {
            std::ostringstream msg;
            msg << "update_centroids_fixed: set " << i << " is empty";
            throw DegenerateSetError(msg.str());
        }
    }
    std::vector<Matrix> centroids(sets.size());
    std::vector<Index> clamped(sets.size(), 0);
    run_over_sets(sets.size(), threads, [&](std::size_t i) {
        const Matrix block = gather_columns(a, sets[i]);
        const SvdFactors f = svd(block);
        Index d = std::min(dims[i], f.numerical_rank);
        if (d < dims[i]) clamped[i] = 1;
        if (d == 0) d = 1; // zero block: keep one direction so the set stays usable
        centroids[i] = f.u.leftCols(d);
    });
    if (clamp_count) {
        *clamp_count = std::accumulate(clamped.begin(), clamped.end(), Index{0});
    }
    return centroids;
}

AdaptUpdate update_centroids_adapt(const Matrix& a,
                                   const std::vector<std::vector<Index>>& sets,
                                   Index r, int threads) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].empty()) {
            std::ostringstream msg;
            msg << "update_centroids_adapt: set " << i << " is empty";
            throw DegenerateSetError(msg.str());
        }
    }
    std::vector<SvdFactors> factors(sets.size());
    run_over_sets(sets.size(), threads, [&](std::size_t i) {
        factors[i] = svd(gather_columns(a, sets[i]));
    });

    // Pool the per-set singular values (up to each set's numerical rank)
    // and keep the global top r; equal values prefer the lower set index,
    // then the lower position within the set.
    struct Entry {
        double sigma;
        std::size_t set;
        Index pos;
    };
    std::vector<Entry> pool;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        for (Index p = 0; p < factors[i].numerical_rank; ++p) {
            pool.push_back({factors[i].singular_values(p), i, p});
        }
    }
    if (static_cast<Index>(pool.size()) < r) {
        std::ostringstream msg;
        msg << "update_centroids_adapt: pooled rank " << pool.size()
            << " below requested r = " << r;
        throw RankError(msg.str());
    }
    std::sort(pool.begin(), pool.end(), [](const Entry& l, const Entry& rgt) {
        if (l.sigma != rgt.sigma) return l.sigma > rgt.sigma;
        if (l.set != rgt.set) return l.set < rgt.set;
        return l.pos < rgt.pos;
    });

    std::vector<Index> counts(sets.size(), 0);
    for (Index t = 0; t < r; ++t) {
        ++counts[pool[static_cast<std::size_t>(t)].set];
    }

    AdaptUpdate out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (counts[i] == 0) continue; // set receives nothing and is dropped
        out.centroids.push_back(factors[i].u.leftCols(counts[i]));
        out.dims.push_back(counts[i]);
        out.survivors.push_back(i);
    }
    return out;
}

namespace {

LloydResult run_lloyd(const Matrix& a, const PartitionConfig& config,
                      const Tolerances& tol, bool adaptive) {
    validate_config(a, config, /*fixed_dims=*/!adaptive);
    std::vector<Index> dims_config;
    if (!adaptive) {
        dims_config = config.dims ? *config.dims : default_dims(config.r, config.k);
    }

    std::vector<std::vector<Index>> sets = initial_sets(a, config);
    std::vector<Matrix> centroids;
    std::vector<Index> dims_actual;

    LloydTrace trace;
    double prev_energy = 0.0;

    for (Index iter = 1; iter <= config.max_iters; ++iter) {
        if (adaptive) {
            const std::size_t before = sets.size();
            drop_empty_sets(sets);
            trace.repair_events += static_cast<Index>(before - sets.size());
            AdaptUpdate upd = update_centroids_adapt(a, sets, config.r, config.threads);
            centroids = std::move(upd.centroids);
            dims_actual = std::move(upd.dims);
        } else {
            trace.repair_events += repair_empty_sets(a, sets, centroids, tol);
            Index clamped = 0;
            centroids = update_centroids_fixed(a, sets, dims_config, config.threads, &clamped);
            trace.clamp_events += clamped;
            dims_actual.resize(centroids.size());
            for (std::size_t i = 0; i < centroids.size(); ++i) {
                dims_actual[i] = centroids[i].cols();
            }
        }

        sets = find_voronoi_sets(a, centroids, tol);
        const double e = assignment_energy(a, sets, centroids, tol);
        trace.energies.push_back(e);
        trace.k_history.push_back(static_cast<Index>(centroids.size()));
        trace.iterations = iter;

        if (e == 0.0) {
            trace.converged = true;
            break;
        }
        if (iter >= 2) {
            const double delta = prev_energy - e;
            const double threshold = config.relative_epsilon
                                         ? config.epsilon * std::max(prev_energy, 1e-300)
                                         : config.epsilon;
            if (delta <= threshold) {
                trace.converged = true;
                break;
            }
        }
        prev_energy = e;
    }

    // Finalize into a self-consistent partition: every centroid is the
    // exact top-d_i basis of its set and no set is empty. The adaptive
    // rule may shrink k here, which forces another reassignment round.
    Partition p;
    if (adaptive) {
        while (true) {
            drop_empty_sets(sets);
            AdaptUpdate upd = update_centroids_adapt(a, sets, config.r, config.threads);
            if (upd.survivors.size() == sets.size()) {
                p.sets = std::move(sets);
                p.centroids = std::move(upd.centroids);
                p.dims = std::move(upd.dims);
                break;
            }
            sets = find_voronoi_sets(a, upd.centroids, tol);
        }
    } else {
        trace.repair_events += repair_empty_sets(a, sets, centroids, tol);
        Index clamped = 0;
        centroids = update_centroids_fixed(a, sets, dims_config, config.threads, &clamped);
        trace.clamp_events += clamped;
        p.sets = std::move(sets);
        p.centroids = std::move(centroids);
        p.dims.resize(p.centroids.size());
        for (std::size_t i = 0; i < p.centroids.size(); ++i) {
            p.dims[i] = p.centroids[i].cols();
        }
    }
    validate_partition(a, p);
    return {std::move(p), std::move(trace)};
}

} // namespace

LloydResult run_cvod(const Matrix& a, const PartitionConfig& config, const Tolerances& tol) {
    return run_lloyd(a, config, tol, /*adaptive=*/false);
}

LloydResult run_adapt_cvod(const Matrix& a, const PartitionConfig& config,
                           const Tolerances& tol) {
    return run_lloyd(a, config, tol, /*adaptive=*/true);
}

Partition trivial_partition(const Matrix& a, Index r) {
    Partition p;
    p.sets.resize(1);
    p.sets[0].resize(static_cast<std::size_t>(a.cols()));
    std::iota(p.sets[0].begin(), p.sets[0].end(), Index{0});
    p.centroids.push_back(truncated_left_basis(a, r));
    p.dims.push_back(r);
    return p;
}

const char* partition_algorithm_name(PartitionAlgorithm alg) {
    switch (alg) {
        case PartitionAlgorithm::none: return "none";
        case PartitionAlgorithm::cvod: return "cvod";
        case PartitionAlgorithm::adapt_cvod: return "adapt-cvod";
    }
    return "?";
}

PartitionAlgorithm parse_partition_algorithm(const std::string& text) {
    if (text == "none") return PartitionAlgorithm::none;
    if (text == "cvod") return PartitionAlgorithm::cvod;
    if (text == "adapt-cvod" || text == "adapt_cvod") return PartitionAlgorithm::adapt_cvod;
    throw ParameterError("unknown partition algorithm: '" + text + "'");
}

LloydResult run_partition_algorithm(const Matrix& a, PartitionAlgorithm alg,
                                    const PartitionConfig& config,
                                    const Tolerances& tol) {
    switch (alg) {
        case PartitionAlgorithm::none: {
            const Index rank = numerical_rank(a);
            if (config.r < 1 || config.r > rank) {
                std::ostringstream msg;
                msg << "partition: r = " << config.r << " outside [1, numerical rank "
                    << rank << "]";
                throw RankError(msg.str());
            }
            return {trivial_partition(a, config.r), LloydTrace{}};
        }
        case PartitionAlgorithm::cvod:
            return run_cvod(a, config, tol);
        case PartitionAlgorithm::adapt_cvod:
            return run_adapt_cvod(a, config, tol);
    }
    throw ParameterError("unknown partition algorithm");
}

} // namespace pcss
