#pragma once

//
// Synthetic desk-scale test matrices, deterministic per seed.
//

#include <cstdint>
#include <string>
#include <vector>

#include "pcss/linalg.hpp"

namespace pcss {

enum class GeneratorKind {
    lowrank_noise, // exact low-rank plus dense Gaussian noise
    clustered,     // column clusters living in angled subspaces
    spectrum,      // prescribed singular values
};

struct GeneratorParams {
    GeneratorKind kind = GeneratorKind::lowrank_noise;
    Index rows = 0;
    Index cols = 0;

    // lowrank_noise
    Index true_rank = 1;
    double noise_sigma = 0.0;

    // clustered: `clusters` groups of columns, each spanning a
    // subspace_dim-dimensional subspace tilted angle_deg away from a shared
    // core subspace. 90 degrees makes the cluster subspaces mutually
    // orthogonal.
    Index clusters = 2;
    Index subspace_dim = 1;
    double angle_deg = 90.0;

    // spectrum (values are sorted descending internally)
    std::vector<double> sigma;
};

GeneratorKind parse_generator_kind(const std::string& text);
const char* generator_kind_name(GeneratorKind kind);

// Short human-readable echo of the parameters, used in run reports.
std::string describe(const GeneratorParams& params);

Matrix generate(const GeneratorParams& params, std::uint64_t seed);

} // namespace pcss
