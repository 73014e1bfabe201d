#pragma once

//
// Pluggable column-selection algorithms. Every selector maps
// (matrix, count) -> distinct column indices whose columns are linearly
// independent. Deterministic kinds are pure functions of (matrix, count);
// sampling kinds are pure functions of (matrix, count, seed).
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcss/linalg.hpp"
#include "pcss/tolerances.hpp"

namespace pcss {

enum class SelectorKind {
    deim,              // interpolation indices of the top right singular vectors
    cpqr,              // column-pivoted QR pivot order
    lupp,              // partially pivoted LU on the transpose; row pivots pick columns
    norm_sampling,     // weights proportional to squared column norms
    leverage_sampling, // weights proportional to leverage scores
};

struct SelectorSpec {
    SelectorKind kind = SelectorKind::cpqr;
    std::optional<std::uint64_t> seed; // required for sampling kinds
    Index oversampling = 0;            // sampling kinds: extra candidates drawn,
                                       // the r heaviest by weight are kept
    std::optional<Index> leverage_rank; // leverage scores use up to this many
                                        // right singular vectors (defaults to r;
                                        // clamped to the input's numerical rank)
};

struct ColumnSelection {
    std::vector<Index> indices; // distinct, in selection order
    Index cardinality() const { return static_cast<Index>(indices.size()); }
};

const char* selector_name(SelectorKind kind);

// Parses "cpqr", "deim", "lupp", "norm:seed=7", "leverage:seed=99,k=10",
// "norm:seed=7,oversample=2". Throws ParameterError on unknown kinds or
// malformed options.
SelectorSpec parse_selector_spec(const std::string& text);

std::string selector_spec_to_string(const SelectorSpec& spec);

// Dispatch on spec.kind. Requires 1 <= r <= numerical_rank(a); sampling
// kinds additionally require a seed.
ColumnSelection select(const SelectorSpec& spec, const Matrix& a, Index r,
                       const Tolerances& tol = {});

ColumnSelection deim_select(const Matrix& a, Index r, const Tolerances& tol = {});
ColumnSelection cpqr_select(const Matrix& a, Index r, const Tolerances& tol = {});
ColumnSelection lupp_select(const Matrix& a, Index r, const Tolerances& tol = {});

// Sampling without replacement. Draws whose columns are linearly dependent
// on the current selection are rejected and redrawn, up to
// tol.sampling_retries per slot; exhaustion raises RankError.
ColumnSelection norm_sampling_select(const Matrix& a, Index r, std::uint64_t seed,
                                     Index oversampling = 0, const Tolerances& tol = {});
ColumnSelection leverage_sampling_select(const Matrix& a, Index r, Index k_lev,
                                         std::uint64_t seed, Index oversampling = 0,
                                         const Tolerances& tol = {});

} // namespace pcss
