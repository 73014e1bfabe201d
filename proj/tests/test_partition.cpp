#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "pcss/partition.hpp"
#include "test_support.hpp"

using namespace pcss;
using testing::random_matrix;
using testing::random_orthonormal;
using testing::with_spectrum;

namespace {

Matrix basis_of(const Matrix& a, const std::vector<Index>& set, Index d) {
    return truncated_left_basis(gather_columns(a, set), d);
}

// Naive double-loop oracle for the energy functional.
double energy_oracle(const Matrix& a, const Partition& p) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.sets.size(); ++i) {
        for (const Index j : p.sets[i]) {
            const Vector x = a.col(j);
            const Vector res = x - p.centroids[i] * (p.centroids[i].transpose() * x);
            total += res.squaredNorm();
        }
    }
    return total;
}

} // namespace

TEST_CASE("energy of a perfectly represented identity partition is zero") {
    const Matrix a = Matrix::Identity(4, 4);
    Partition p;
    p.sets = {{0, 1}, {2, 3}};
    p.centroids = {basis_of(a, p.sets[0], 2), basis_of(a, p.sets[1], 2)};
    p.dims = {2, 2};
    CHECK(energy(a, p) == doctest::Approx(0.0));
}

TEST_CASE("energy vanishes whenever dims reach each block's rank") {
    const Matrix a = random_matrix(6, 8, 3);
    Partition p;
    p.sets = {{0, 2, 4}, {1, 3, 5, 6, 7}};
    p.centroids = {basis_of(a, p.sets[0], 3), basis_of(a, p.sets[1], 5)};
    p.dims = {3, 5};
    CHECK(energy(a, p) < 1e-12 * a.squaredNorm());
}

TEST_CASE("energy matches the per-column loop oracle") {
    const Matrix a = random_matrix(10, 12, 21);
    Partition p;
    p.sets = {{0, 3, 6, 9}, {1, 4, 7, 10}, {2, 5, 8, 11}};
    for (const auto& set : p.sets) {
        p.centroids.push_back(basis_of(a, set, 1));
        p.dims.push_back(1);
    }
    CHECK(energy(a, p) == doctest::Approx(energy_oracle(a, p)).epsilon(1e-9));
}

TEST_CASE("voronoi assignment splits coordinate directions") {
    Matrix a(2, 2);
    a << 1, 0, 0, 1;
    Matrix e1(2, 1), e2(2, 1);
    e1 << 1, 0;
    e2 << 0, 1;
    const auto sets = find_voronoi_sets(a, {e1, e2});
    CHECK(sets[0] == std::vector<Index>{0});
    CHECK(sets[1] == std::vector<Index>{1});
}

TEST_CASE("equidistant columns go to the smallest centroid index") {
    Matrix a(2, 1);
    a << 1, 1;
    Matrix e1(2, 1), e2(2, 1);
    e1 << 1, 0;
    e2 << 0, 1;
    const auto sets = find_voronoi_sets(a, {e1, e2});
    CHECK(sets[0] == std::vector<Index>{0});
    CHECK(sets[1].empty());
}

TEST_CASE("voronoi assignment matches the exhaustive argmin oracle") {
    const Matrix a = random_matrix(6, 20, 8);
    std::vector<Matrix> centroids = {random_orthonormal(6, 2, 100),
                                     random_orthonormal(6, 1, 101),
                                     random_orthonormal(6, 3, 102)};
    const auto sets = find_voronoi_sets(a, centroids);
    for (Index j = 0; j < a.cols(); ++j) {
        const Vector x = a.col(j);
        std::size_t expect = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < centroids.size(); ++i) {
            const double d = (x - centroids[i] * (centroids[i].transpose() * x)).squaredNorm();
            if (d < best) {
                best = d;
                expect = i;
            }
        }
        CHECK(std::find(sets[expect].begin(), sets[expect].end(), j) != sets[expect].end());
    }
}

TEST_CASE("fixed centroid update keeps the dominant direction") {
    // block with spectrum (5, 1): a 1-dim centroid leaves energy 1
    const Matrix a = with_spectrum(6, 4, {5.0, 1.0}, 31);
    std::vector<std::vector<Index>> sets = {{0, 1, 2, 3}};
    const auto centroids = update_centroids_fixed(a, sets, {1});
    Partition p{sets, centroids, {1}};
    CHECK(energy(a, p) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("fixed centroid update with full rank removes all energy") {
    const Matrix a = random_matrix(5, 7, 4);
    std::vector<std::vector<Index>> sets = {{0, 1, 2, 3, 4, 5, 6}};
    const auto centroids = update_centroids_fixed(a, sets, {5});
    Partition p{sets, centroids, {5}};
    CHECK(energy(a, p) < 1e-12 * a.squaredNorm());
}

TEST_CASE("fixed centroid update is locally optimal") {
    // any perturbed rank-d basis does no better
    const Matrix a = random_matrix(8, 10, 31);
    std::vector<std::vector<Index>> sets = {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}};
    const auto centroids = update_centroids_fixed(a, sets, {2});
    Partition p{sets, centroids, {2}};
    const double optimal = energy(a, p);
    for (int t = 0; t < 20; ++t) {
        const Matrix perturbed = random_orthonormal(8, 2, 4000 + static_cast<std::uint64_t>(t));
        Partition q{sets, {perturbed}, {2}};
        CHECK(optimal <= energy(a, q) + 1e-10);
    }
}

TEST_CASE("fixed centroid update rejects empty sets") {
    const Matrix a = random_matrix(4, 4, 2);
    CHECK_THROWS_AS(update_centroids_fixed(a, {{0, 1, 2, 3}, {}}, {1, 1}),
                    DegenerateSetError);
}

TEST_CASE("adaptive update allocates the pooled top-r") {
    // blocks with spectra (10,1) and (5,4); top-3 = {10,5,4} -> dims (1,2)
    const Matrix b1 = with_spectrum(8, 3, {10.0, 1.0}, 50);
    const Matrix b2 = with_spectrum(8, 3, {5.0, 4.0}, 51);
    Matrix a(8, 6);
    a << b1, b2;
    const AdaptUpdate upd = update_centroids_adapt(a, {{0, 1, 2}, {3, 4, 5}}, 3);
    CHECK(upd.survivors == std::vector<std::size_t>{0, 1});
    CHECK(upd.dims == std::vector<Index>{1, 2});
}

TEST_CASE("adaptive update drops sets that receive nothing") {
    const Matrix b1 = with_spectrum(8, 4, {10.0, 9.0}, 60);
    const Matrix b2 = with_spectrum(8, 4, {0.1, 0.05}, 61);
    Matrix a(8, 8);
    a << b1, b2;
    const AdaptUpdate upd = update_centroids_adapt(a, {{0, 1, 2, 3}, {4, 5, 6, 7}}, 2);
    CHECK(upd.survivors == std::vector<std::size_t>{0});
    CHECK(upd.dims == std::vector<Index>{2});
}

TEST_CASE("adaptive update with one set matches the fixed rule") {
    const Matrix a = random_matrix(7, 9, 62);
    std::vector<std::vector<Index>> sets(1);
    sets[0].resize(9);
    std::iota(sets[0].begin(), sets[0].end(), Index{0});
    const AdaptUpdate upd = update_centroids_adapt(a, sets, 4);
    const auto fixed = update_centroids_fixed(a, sets, {4});
    CHECK(upd.dims == std::vector<Index>{4});
    CHECK((upd.centroids[0] - fixed[0]).norm() < 1e-12);
}

TEST_CASE("adaptive update rejects r beyond the pooled rank") {
    const Matrix a = with_spectrum(6, 6, {3.0, 1.0}, 63); // rank 2
    CHECK_THROWS_AS(update_centroids_adapt(a, {{0, 1, 2}, {3, 4, 5}}, 5), RankError);
}

TEST_CASE("cvod separates orthogonal column clusters quickly") {
    // two orthogonal rank-1 directions plus tiny within-cluster noise
    const Index m = 10;
    std::mt19937_64 eng(77);
    Vector u1 = Vector::Zero(m), u2 = Vector::Zero(m);
    u1(0) = 1.0;
    u2(1) = 1.0;
    Matrix a(m, 12);
    for (Index j = 0; j < 12; ++j) {
        const Vector& u = (j < 6) ? u1 : u2;
        a.col(j) = uniform_real(eng, 0.5, 2.0) * u;
        for (Index i = 2; i < m; ++i) a(i, j) = 1e-4 * uniform_real(eng, -1.0, 1.0);
    }
    PartitionConfig config;
    config.k = 2;
    config.r = 2;
    config.dims = std::vector<Index>{1, 1};
    config.epsilon = 1e-12;
    config.init = InitKind::provided;
    config.initial_sets = std::vector<std::vector<Index>>{
        {0, 1, 2, 3, 4, 5}, {6, 7, 8, 9, 10, 11}};
    const LloydResult res = run_cvod(a, config);
    CHECK(res.trace.iterations <= 3);

    // oracle: within-cluster tail energy of the true clusters
    double tail = 0.0;
    for (int c = 0; c < 2; ++c) {
        const Matrix block = a.middleCols(c * 6, 6);
        const Vector sv = singular_values(block);
        tail += block.squaredNorm() - sv(0) * sv(0);
    }
    CHECK(energy(a, res.partition) == doctest::Approx(tail).epsilon(1e-6));
}

TEST_CASE("a huge epsilon stops at the first delta evaluation") {
    // delta is defined from the second iteration on, so the literal rule
    // runs exactly two iterations before stopping
    const Matrix a = random_matrix(8, 16, 5);
    PartitionConfig config;
    config.k = 2;
    config.r = 4;
    config.epsilon = 1e9;
    config.seed = 3;
    const LloydResult res = run_cvod(a, config);
    CHECK(res.trace.iterations == 2);
    CHECK(res.trace.converged);
}

TEST_CASE("cvod energies are monotone and k stays fixed") {
    const Matrix a = random_matrix(12, 40, 1);
    PartitionConfig config;
    config.k = 3;
    config.r = 6;
    config.epsilon = 1e-10;
    config.seed = 1;
    const LloydResult res = run_cvod(a, config);
    REQUIRE(!res.trace.energies.empty());
    for (std::size_t j = 0; j + 1 < res.trace.energies.size(); ++j) {
        CHECK(res.trace.energies[j + 1] <= res.trace.energies[j] + 1e-9);
    }
    CHECK(res.trace.energies.back() <= res.trace.energies.front() + 1e-9);
    for (const Index k : res.trace.k_history) CHECK(k == 3);
    CHECK(res.partition.k() == 3);
    // terminal partition energy does not exceed the last recorded value
    CHECK(energy(a, res.partition) <= res.trace.energies.back() + 1e-9);
}

TEST_CASE("adaptive runs conserve the total dimension") {
    const Matrix a = random_matrix(16, 32, 9);
    PartitionConfig config;
    config.k = 4;
    config.r = 8;
    config.epsilon = 1e-10;
    config.seed = 2;
    const LloydResult res = run_adapt_cvod(a, config);
    CHECK(std::accumulate(res.partition.dims.begin(), res.partition.dims.end(), Index{0}) == 8);
    for (std::size_t j = 0; j + 1 < res.trace.energies.size(); ++j) {
        CHECK(res.trace.energies[j + 1] <= res.trace.energies[j] + 1e-9);
    }
    validate_partition(a, res.partition);
}

TEST_CASE("adaptive stepping conserves the total dimension each iteration") {
    const Matrix a = random_matrix(14, 28, 40);
    const Index r = 6;
    std::vector<std::vector<Index>> sets(3);
    for (Index j = 0; j < 28; ++j) sets[static_cast<std::size_t>(j % 3)].push_back(j);
    for (int iter = 0; iter < 5; ++iter) {
        std::erase_if(sets, [](const std::vector<Index>& s) { return s.empty(); });
        const AdaptUpdate upd = update_centroids_adapt(a, sets, r);
        CHECK(std::accumulate(upd.dims.begin(), upd.dims.end(), Index{0}) == r);
        sets = find_voronoi_sets(a, upd.centroids);
    }
}

TEST_CASE("partition validation catches overlaps and gaps") {
    const Matrix a = random_matrix(4, 4, 11);
    Partition p;
    p.sets = {{0, 1}, {1, 2, 3}}; // overlap
    p.centroids = {basis_of(a, p.sets[0], 1), basis_of(a, p.sets[1], 1)};
    p.dims = {1, 1};
    CHECK_THROWS_AS(validate_partition(a, p), ParameterError);
    p.sets = {{0, 1}, {2}}; // gap
    CHECK_THROWS_AS(validate_partition(a, p), ParameterError);
}

TEST_CASE("config validation") {
    const Matrix a = random_matrix(6, 8, 12);
    PartitionConfig config;
    config.k = 2;
    config.r = 4;
    config.seed = 1;

    PartitionConfig bad = config;
    bad.dims = std::vector<Index>{3, 2}; // sums to 5, not 4
    CHECK_THROWS_AS(run_cvod(a, bad), ParameterError);

    bad = config;
    bad.r = 7; // beyond rank 6
    CHECK_THROWS_AS(run_cvod(a, bad), RankError);

    bad = config;
    bad.dims = std::vector<Index>{2, 2};
    CHECK_THROWS_AS(run_adapt_cvod(a, bad), ParameterError); // dims only for cvod

    bad = config;
    bad.k = 9; // more sets than columns
    CHECK_THROWS_AS(run_cvod(a, bad), ParameterError);
}

TEST_CASE("default dims distribute the remainder to the first sets") {
    CHECK(default_dims(7, 3) == std::vector<Index>{3, 2, 2});
    CHECK(default_dims(6, 3) == std::vector<Index>{2, 2, 2});
    CHECK_THROWS_AS(default_dims(2, 3), ParameterError);
}

TEST_CASE("trivial partition is one set with the top-r basis") {
    const Matrix a = random_matrix(6, 9, 14);
    const Partition p = trivial_partition(a, 3);
    CHECK(p.k() == 1);
    CHECK(p.dims == std::vector<Index>{3});
    validate_partition(a, p);
    const Vector s = singular_values(a);
    CHECK(energy(a, p) == doctest::Approx(s.tail(s.size() - 3).squaredNorm()).epsilon(1e-9));
}

TEST_CASE("threaded centroid updates match the sequential result") {
    const Matrix a = random_matrix(24, 48, 15);
    std::vector<std::vector<Index>> sets(4);
    for (Index j = 0; j < 48; ++j) sets[static_cast<std::size_t>(j % 4)].push_back(j);
    const auto seq = update_centroids_fixed(a, sets, {2, 2, 2, 2}, 1);
    const auto par = update_centroids_fixed(a, sets, {2, 2, 2, 2}, 4);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK((seq[i] - par[i]).norm() == 0.0);
    }
}
