#include "pcss/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pcss/rng.hpp"

namespace pcss {

namespace {

// Largest entry by magnitude; ties go to the lowest index.
Index argmax_abs(const Vector& v) {
    Index best = 0;
    double best_val = std::abs(v(0));
    for (Index i = 1; i < v.size(); ++i) {
        const double val = std::abs(v(i));
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    return best;
}

void check_request(const Matrix& a, Index r, Index rank) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw DimensionError("select: matrix is empty");
    }
    if (r < 1) {
        throw ParameterError("select: requested count must be positive");
    }
    if (r > rank) {
        std::ostringstream msg;
        msg << "select: requested " << r << " columns but numerical rank is " << rank;
        throw RankError(msg.str());
    }
}

// Weighted sampling without replacement over the columns of a, rejecting
// draws that are linearly dependent on the columns already accepted.
ColumnSelection sample_columns(const Matrix& a, Index r, const Vector& weights,
                               std::uint64_t seed, Index oversampling,
                               const Tolerances& tol) {
    std::mt19937_64 eng(seed);

    std::vector<Index> pool;
    std::vector<double> pool_weight;
    for (Index j = 0; j < a.cols(); ++j) {
        if (weights(j) > 0.0) {
            pool.push_back(j);
            pool_weight.push_back(weights(j));
        }
    }

    const double sigma1 = spectral_norm(a);
    const double accept = tol.independence * sigma1;

    const Index want = std::min<Index>(r + oversampling, static_cast<Index>(pool.size()));
    std::vector<Index> accepted;
    Matrix q(a.rows(), 0); // orthonormal basis of the accepted columns

    while (static_cast<Index>(accepted.size()) < want) {
        int retries = 0;
        bool placed = false;
        while (!placed) {
            if (pool.empty() || retries > tol.sampling_retries) {
                if (static_cast<Index>(accepted.size()) >= r) break; // pool ran dry past r
                throw RankError("sampling selector: could not draw enough independent columns");
            }
            const double total = std::accumulate(pool_weight.begin(), pool_weight.end(), 0.0);
            double ticket = uniform01(eng) * total;
            std::size_t pick = 0;
            for (; pick + 1 < pool.size(); ++pick) {
                ticket -= pool_weight[pick];
                if (ticket < 0.0) break;
            }
            const Index candidate = pool[pick];
            Vector residual = a.col(candidate);
            if (q.cols() > 0) residual -= q * (q.transpose() * residual);
            const double norm = residual.norm();
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
            pool_weight.erase(pool_weight.begin() + static_cast<std::ptrdiff_t>(pick));
            if (norm > accept) {
                q.conservativeResize(Eigen::NoChange, q.cols() + 1);
                q.col(q.cols() - 1) = residual / norm;
                accepted.push_back(candidate);
                placed = true;
            } else {
                ++retries; // dependent: drop from the pool for good and redraw
            }
        }
        if (!placed) break;
    }

    if (static_cast<Index>(accepted.size()) < r) {
        throw RankError("sampling selector: could not draw enough independent columns");
    }

    ColumnSelection sel;
    if (static_cast<Index>(accepted.size()) == r) {
        sel.indices = std::move(accepted);
        return sel;
    }

    // Oversampled: keep the r heaviest candidates, draw order breaking ties.
    std::vector<std::size_t> order(accepted.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t rgt) {
        return weights(accepted[l]) > weights(accepted[rgt]);
    });
    order.resize(static_cast<std::size_t>(r));
    std::sort(order.begin(), order.end()); // restore draw order
    for (std::size_t pos : order) sel.indices.push_back(accepted[pos]);
    return sel;
}

} // namespace

const char* selector_name(SelectorKind kind) {
    switch (kind) {
        case SelectorKind::deim: return "deim";
        case SelectorKind::cpqr: return "cpqr";
        case SelectorKind::lupp: return "lupp";
        case SelectorKind::norm_sampling: return "norm";
        case SelectorKind::leverage_sampling: return "leverage";
    }
    return "?";
}

SelectorSpec parse_selector_spec(const std::string& text) {
    SelectorSpec spec;
    std::string head = text;
    std::string opts;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        head = text.substr(0, colon);
        opts = text.substr(colon + 1);
    }

    if (head == "deim") spec.kind = SelectorKind::deim;
    else if (head == "cpqr") spec.kind = SelectorKind::cpqr;
    else if (head == "lupp") spec.kind = SelectorKind::lupp;
    else if (head == "norm") spec.kind = SelectorKind::norm_sampling;
    else if (head == "leverage") spec.kind = SelectorKind::leverage_sampling;
    else throw ParameterError("unknown selector kind: '" + head + "'");

    std::stringstream stream(opts);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("selector option '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
            if (key == "seed") spec.seed = std::stoull(value);
            else if (key == "k") spec.leverage_rank = std::stoll(value);
            else if (key == "oversample") spec.oversampling = std::stoll(value);
            else throw ParameterError("unknown selector option: '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ParameterError("selector option '" + item + "' has a non-numeric value");
        } catch (const std::out_of_range&) {
            throw ParameterError("selector option '" + item + "' is out of range");
        }
    }
    return spec;
}

std::string selector_spec_to_string(const SelectorSpec& spec) {
    std::ostringstream out;
    out << selector_name(spec.kind);
    char sep = ':';
    if (spec.seed) {
        out << sep << "seed=" << *spec.seed;
        sep = ',';
    }
    if (spec.leverage_rank) {
        out << sep << "k=" << *spec.leverage_rank;
        sep = ',';
    }
    if (spec.oversampling > 0) {
        out << sep << "oversample=" << spec.oversampling;
    }
    return out.str();
}

ColumnSelection select(const SelectorSpec& spec, const Matrix& a, Index r,
                       const Tolerances& tol) {
    const bool sampling = spec.kind == SelectorKind::norm_sampling ||
                          spec.kind == SelectorKind::leverage_sampling;
    if (sampling && !spec.seed) {
        throw ParameterError("selector '" + std::string(selector_name(spec.kind)) +
                             "' requires a seed");
    }
    switch (spec.kind) {
        case SelectorKind::deim:
            return deim_select(a, r, tol);
        case SelectorKind::cpqr:
            return cpqr_select(a, r, tol);
        case SelectorKind::lupp:
            return lupp_select(a, r, tol);
        case SelectorKind::norm_sampling:
            return norm_sampling_select(a, r, *spec.seed, spec.oversampling, tol);
        case SelectorKind::leverage_sampling: {
            // The requested k is an upper limit; a projected block inside a
            // partitioned run may offer less rank than the full matrix.
            Index k_lev = spec.leverage_rank.value_or(r);
            k_lev = std::min(k_lev, numerical_rank(a));
            return leverage_sampling_select(a, r, k_lev, *spec.seed, spec.oversampling, tol);
        }
    }
    throw ParameterError("select: unknown selector kind");
}

ColumnSelection deim_select(const Matrix& a, Index r, const Tolerances& tol) {
    (void)tol;
    const SvdFactors f = svd(a);
    check_request(a, r, f.numerical_rank);

    // Interpolation indices of the top right singular vectors pick columns.
    const Matrix w = f.v().leftCols(r); // n x r
    ColumnSelection sel;
    sel.indices.reserve(static_cast<std::size_t>(r));
    sel.indices.push_back(argmax_abs(w.col(0)));
    for (Index j = 1; j < r; ++j) {
        const Index count = j;
        Matrix sub(count, count);
        Vector rhs(count);
        for (Index i = 0; i < count; ++i) {
            for (Index l = 0; l < count; ++l) {
                sub(i, l) = w(sel.indices[static_cast<std::size_t>(i)], l);
            }
            rhs(i) = w(sel.indices[static_cast<std::size_t>(i)], j);
        }
        const Vector coeff = sub.partialPivLu().solve(rhs);
        const Vector residual = w.col(j) - w.leftCols(count) * coeff;
        sel.indices.push_back(argmax_abs(residual));
    }
    return sel;
}

ColumnSelection cpqr_select(const Matrix& a, Index r, const Tolerances& tol) {
    check_request(a, r, numerical_rank(a));

    // Classical column-pivoted orthogonalization; residual norms recomputed
    // from the updated working copy, ties broken by the lowest column index.
    Matrix work = a;
    const Index n = a.cols();
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    ColumnSelection sel;
    sel.indices.reserve(static_cast<std::size_t>(r));
    const double floor = tol.independence * spectral_norm(a);

    for (Index step = 0; step < r; ++step) {
        Index pivot = -1;
        double best = -1.0;
        for (Index j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const double norm = work.col(j).norm();
            if (norm > best) {
                best = norm;
                pivot = j;
            }
        }
        if (pivot < 0 || best <= floor) {
            throw RankError("cpqr_select: residual collapsed before reaching the request");
        }
        used[static_cast<std::size_t>(pivot)] = true;
        sel.indices.push_back(pivot);
        const Vector q = work.col(pivot) / best;
        for (Index j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            work.col(j) -= q * q.dot(work.col(j));
        }
    }
    return sel;
}

ColumnSelection lupp_select(const Matrix& a, Index r, const Tolerances& tol) {
    (void)tol;
    check_request(a, r, numerical_rank(a));

    // Partial pivoting permutes rows; running it on a^T makes the pivot
    // order a column selection for a. Columns of the work matrix whose
    // remaining entries are all negligible are skipped.
    Matrix work = a.transpose(); // n x m
    const Index n = work.rows();
    const Index m = work.cols();
    std::vector<Index> label(static_cast<std::size_t>(n));
    std::iota(label.begin(), label.end(), Index{0});

    const double zero_tol =
        rank_cutoff(a.rows(), a.cols(), a.cwiseAbs().maxCoeff());

    Index row = 0;
    for (Index col = 0; col < m && row < r; ++col) {
        Index pivot = row;
        double best = std::abs(work(row, col));
        for (Index i = row + 1; i < n; ++i) {
            const double val = std::abs(work(i, col));
            if (val > best) {
                best = val;
                pivot = i;
            }
        }
        if (best <= zero_tol) continue;
        if (pivot != row) {
            work.row(pivot).swap(work.row(row));
            std::swap(label[static_cast<std::size_t>(pivot)],
                      label[static_cast<std::size_t>(row)]);
        }
        for (Index i = row + 1; i < n; ++i) {
            const double factor = work(i, col) / work(row, col);
            if (factor != 0.0) {
                work.row(i).tail(m - col) -= factor * work.row(row).tail(m - col);
            }
        }
        ++row;
    }
    if (row < r) {
        throw RankError("lupp_select: ran out of pivots before reaching the request");
    }
    ColumnSelection sel;
    sel.indices.assign(label.begin(), label.begin() + static_cast<std::ptrdiff_t>(r));
    return sel;
}

ColumnSelection norm_sampling_select(const Matrix& a, Index r, std::uint64_t seed,
                                     Index oversampling, const Tolerances& tol) {
    check_request(a, r, numerical_rank(a));
    const Vector weights = a.colwise().squaredNorm();
    return sample_columns(a, r, weights, seed, oversampling, tol);
}

ColumnSelection leverage_sampling_select(const Matrix& a, Index r, Index k_lev,
                                         std::uint64_t seed, Index oversampling,
                                         const Tolerances& tol) {
    const SvdFactors f = svd(a);
    check_request(a, r, f.numerical_rank);
    if (k_lev < 1 || k_lev > f.numerical_rank) {
        std::ostringstream msg;
        msg << "leverage_sampling_select: k = " << k_lev
            << " outside [1, numerical rank " << f.numerical_rank << "]";
        throw ParameterError(msg.str());
    }
    // Leverage of column j: squared row norm of the top-k right singular block.
    const Matrix w = f.v().leftCols(k_lev);
    const Vector weights = w.rowwise().squaredNorm();
    return sample_columns(a, r, weights, seed, oversampling, tol);
}

} // namespace pcss
