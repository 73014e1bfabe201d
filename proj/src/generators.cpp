#include "pcss/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pcss/rng.hpp"

namespace pcss {

namespace {

Matrix gaussian(Index rows, Index cols, std::mt19937_64& eng) {
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            g(i, j) = normal01(eng);
        }
    }
    return g;
}

Matrix orthonormal(Index rows, Index cols, std::mt19937_64& eng) {
    const Matrix g = gaussian(rows, cols, eng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(rows, cols);
}

Matrix generate_lowrank_noise(const GeneratorParams& p, std::mt19937_64& eng) {
    if (p.true_rank < 1 || p.true_rank > std::min(p.rows, p.cols)) {
        throw ParameterError("generate: true_rank outside [1, min(rows, cols)]");
    }
    if (p.noise_sigma < 0.0) {
        throw ParameterError("generate: noise_sigma must be nonnegative");
    }
    const Matrix u = orthonormal(p.rows, p.true_rank, eng);
    const Matrix w = orthonormal(p.cols, p.true_rank, eng);
    Vector s(p.true_rank);
    for (Index i = 0; i < p.true_rank; ++i) {
        s(i) = static_cast<double>(p.true_rank - i);
    }
    Matrix a = u * s.asDiagonal() * w.transpose();
    if (p.noise_sigma > 0.0) {
        a += p.noise_sigma * gaussian(p.rows, p.cols, eng);
    }
    return a;
}

Matrix generate_clustered(const GeneratorParams& p, std::mt19937_64& eng) {
    if (p.clusters < 1 || p.subspace_dim < 1) {
        throw ParameterError("generate: clusters and subspace_dim must be positive");
    }
    if (!(p.angle_deg > 0.0) || p.angle_deg > 90.0) {
        throw ParameterError("generate: angle_deg must lie in (0, 90]");
    }
    if (p.cols < p.clusters) {
        throw ParameterError("generate: need at least one column per cluster");
    }
    const bool orthogonal = p.angle_deg == 90.0;
    const Index needed = p.subspace_dim * (p.clusters + (orthogonal ? 0 : 1));
    if (p.rows < needed) {
        std::ostringstream msg;
        msg << "generate: clustered needs rows >= " << needed << ", got " << p.rows;
        throw ParameterError(msg.str());
    }

    // One orthonormal frame carved into a shared core plus one private
    // block per cluster; each cluster basis mixes core and private parts
    // by the requested angle.
    const Matrix frame = orthonormal(p.rows, needed, eng);
    const double angle = p.angle_deg * std::numbers::pi / 180.0;
    std::vector<Matrix> bases;
    for (Index c = 0; c < p.clusters; ++c) {
        if (orthogonal) {
            bases.push_back(frame.middleCols(c * p.subspace_dim, p.subspace_dim));
        } else {
            const Matrix core = frame.leftCols(p.subspace_dim);
            const Matrix priv = frame.middleCols((c + 1) * p.subspace_dim, p.subspace_dim);
            bases.push_back(std::cos(angle) * core + std::sin(angle) * priv);
        }
    }

    Matrix a(p.rows, p.cols);
    const Index base_count = p.cols / p.clusters;
    const Index extra = p.cols % p.clusters;
    Index col = 0;
    for (Index c = 0; c < p.clusters; ++c) {
        const Index count = base_count + (c < extra ? 1 : 0);
        for (Index t = 0; t < count; ++t, ++col) {
            Vector coeff(p.subspace_dim);
            for (Index i = 0; i < p.subspace_dim; ++i) coeff(i) = normal01(eng);
            a.col(col) = bases[static_cast<std::size_t>(c)] * coeff;
        }
    }
    return a;
}

Matrix generate_spectrum(const GeneratorParams& p, std::mt19937_64& eng) {
    if (p.sigma.empty()) {
        throw ParameterError("generate: spectrum needs at least one singular value");
    }
    if (static_cast<Index>(p.sigma.size()) > std::min(p.rows, p.cols)) {
        throw ParameterError("generate: more singular values than min(rows, cols)");
    }
    std::vector<double> sigma = p.sigma;
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    if (sigma.back() < 0.0) {
        throw ParameterError("generate: singular values must be nonnegative");
    }
    const Index count = static_cast<Index>(sigma.size());
    const Matrix u = orthonormal(p.rows, count, eng);
    const Matrix w = orthonormal(p.cols, count, eng);
    Vector s(count);
    for (Index i = 0; i < count; ++i) s(i) = sigma[static_cast<std::size_t>(i)];
    return u * s.asDiagonal() * w.transpose();
}

} // namespace

GeneratorKind parse_generator_kind(const std::string& text) {
    if (text == "lowrank-noise" || text == "lowrank_noise") return GeneratorKind::lowrank_noise;
    if (text == "clustered") return GeneratorKind::clustered;
    if (text == "spectrum") return GeneratorKind::spectrum;
    throw ParameterError("unknown generator kind: '" + text + "'");
}

const char* generator_kind_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::lowrank_noise: return "lowrank-noise";
        case GeneratorKind::clustered: return "clustered";
        case GeneratorKind::spectrum: return "spectrum";
    }
    return "?";
}

std::string describe(const GeneratorParams& params) {
    std::ostringstream out;
    out << generator_kind_name(params.kind) << "(" << params.rows << "x" << params.cols;
    switch (params.kind) {
        case GeneratorKind::lowrank_noise:
            out << ",rank=" << params.true_rank << ",noise=" << params.noise_sigma;
            break;
        case GeneratorKind::clustered:
            out << ",clusters=" << params.clusters << ",dim=" << params.subspace_dim
                << ",angle=" << params.angle_deg;
            break;
        case GeneratorKind::spectrum:
            out << ",values=" << params.sigma.size();
            break;
    }
    out << ")";
    return out.str();
}

Matrix generate(const GeneratorParams& params, std::uint64_t seed) {
    if (params.rows < 1 || params.cols < 1) {
        throw ParameterError("generate: rows and cols must be positive");
    }
    std::mt19937_64 eng(seed);
    switch (params.kind) {
        case GeneratorKind::lowrank_noise:
            return generate_lowrank_noise(params, eng);
        case GeneratorKind::clustered:
            return generate_clustered(params, eng);
        case GeneratorKind::spectrum:
            return generate_spectrum(params, eng);
    }
    throw ParameterError("generate: unknown kind");
}

} // namespace pcss
