#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pcss/linalg.hpp"
#include "test_support.hpp"

using namespace pcss;
using testing::random_matrix;
using testing::random_orthonormal;
using testing::with_spectrum;

TEST_CASE("svd of identity") {
    const Matrix a = Matrix::Identity(3, 3);
    const SvdFactors f = svd(a);
    for (int i = 0; i < 3; ++i) CHECK(f.singular_values(i) == doctest::Approx(1.0));
    CHECK(f.numerical_rank == 3);
    CHECK((f.u * f.singular_values.asDiagonal() * f.vt - a).norm() < 1e-12);
}

TEST_CASE("svd of diagonal matrix") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const SvdFactors f = svd(a);
    CHECK(f.singular_values(0) == doctest::Approx(3.0));
    CHECK(f.singular_values(1) == doctest::Approx(2.0));
    CHECK(f.singular_values(2) == doctest::Approx(1.0));
}

TEST_CASE("svd reconstructs a random matrix") {
    const Matrix a = random_matrix(5, 4, 42);
    const SvdFactors f = svd(a);
    const Matrix rec = f.u * f.singular_values.asDiagonal() * f.vt;
    CHECK((rec - a).norm() / a.norm() <= 1e-12);
}

TEST_CASE("svd factor orthonormality and ordering over random shapes") {
    // reconstruction + orthonormality on 100 random matrices up to 64x64
    std::mt19937_64 shapes(2024);
    for (int t = 0; t < 100; ++t) {
        const Index m = 1 + static_cast<Index>(uniform_index(shapes, 64));
        const Index n = 1 + static_cast<Index>(uniform_index(shapes, 64));
        const Matrix a = random_matrix(m, n, 1000 + static_cast<std::uint64_t>(t));
        const SvdFactors f = svd(a);
        const Index p = std::min(m, n);
        CHECK((f.u.transpose() * f.u - Matrix::Identity(p, p)).norm() < 1e-10);
        CHECK((f.vt * f.vt.transpose() - Matrix::Identity(p, p)).norm() < 1e-10);
        for (Index i = 0; i + 1 < p; ++i) {
            CHECK(f.singular_values(i) >= f.singular_values(i + 1));
        }
        const Matrix rec = f.u * f.singular_values.asDiagonal() * f.vt;
        CHECK((rec - a).norm() <= 1e-12 * std::max(1.0, a.norm()));
    }
}

TEST_CASE("svd rejects empty input") {
    CHECK_THROWS_AS(svd(Matrix(0, 0)), DimensionError);
}

TEST_CASE("truncated_left_basis on diagonal spectrum") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const Matrix u = truncated_left_basis(a, 2);
    CHECK(u.rows() == 3);
    CHECK(u.cols() == 2);
    CHECK(std::abs(u(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(u(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("truncated_left_basis of a rank-1 matrix") {
    Vector x(4), y(3);
    x << 1, 2, -1, 0.5;
    y << 2, -3, 1;
    const Matrix a = x * y.transpose();
    const Matrix u = truncated_left_basis(a, 1);
    const Vector xn = x / x.norm();
    CHECK(std::min((u.col(0) - xn).norm(), (u.col(0) + xn).norm()) < 1e-12);
}

TEST_CASE("truncated_left_basis residual matches tail singular values") {
    const Matrix a = random_matrix(6, 5, 7);
    const Matrix u = truncated_left_basis(a, 3);
    const Vector s = singular_values(a);
    const double residual = (a - u * (u.transpose() * a)).norm();
    const double expected = std::sqrt(s(3) * s(3) + s(4) * s(4));
    CHECK(residual == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("truncated_left_basis rejects bad d") {
    const Matrix a = random_matrix(4, 3, 1);
    CHECK_THROWS_AS(truncated_left_basis(a, 0), ParameterError);
    CHECK_THROWS_AS(truncated_left_basis(a, 4), ParameterError);
}

TEST_CASE("best_rank_r at full rank returns the matrix") {
    const Matrix a = random_matrix(5, 5, 11);
    const Index rho = numerical_rank(a);
    CHECK((best_rank_r(a, rho) - a).norm() < 1e-10 * a.norm());
}

TEST_CASE("best_rank_r of diag(3,2,1) at r=1") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    Matrix expected = Matrix::Zero(3, 3);
    expected(0, 0) = 3.0;
    CHECK((best_rank_r(a, 1) - expected).norm() < 1e-12);
}

TEST_CASE("best_rank_r error equals the tail formula") {
    const Matrix a = random_matrix(8, 6, 3);
    const Matrix ar = best_rank_r(a, 2);
    const Vector s = singular_values(a);
    const double tail_sq = s.tail(s.size() - 2).squaredNorm();
    CHECK((a - ar).squaredNorm() == doctest::Approx(tail_sq).epsilon(1e-10));
}

TEST_CASE("best_rank_r is Frobenius-optimal among random projections") {
    // oracle: any competing rank-r orthonormal projection does no better
    for (int t = 0; t < 20; ++t) {
        const Matrix a = random_matrix(10, 8, 500 + static_cast<std::uint64_t>(t));
        const Index r = 3;
        const double best = (a - best_rank_r(a, r)).norm();
        const Matrix p = random_orthonormal(10, r, 900 + static_cast<std::uint64_t>(t));
        const double competing = (a - p * (p.transpose() * a)).norm();
        CHECK(best <= competing + 1e-10);
    }
}

TEST_CASE("qr_factor identity") {
    const Matrix a = Matrix::Identity(3, 3);
    const QrFactors f = qr_factor(a);
    CHECK((f.q * f.r_upper - a).norm() < 1e-12);
    for (Index j = 0; j < 3; ++j) CHECK(std::abs(f.r_upper(j, j)) > 0.0);
}

TEST_CASE("qr_factor of a single column normalizes") {
    Matrix a(2, 1);
    a << 3, 4;
    const QrFactors f = qr_factor(a);
    CHECK(std::abs(f.r_upper(0, 0)) == doctest::Approx(5.0));
    Vector q(2);
    q << 0.6, 0.8;
    CHECK(std::min((f.q.col(0) - q).norm(), (f.q.col(0) + q).norm()) < 1e-12);
}

TEST_CASE("qr_factor reconstructs and stays orthonormal") {
    for (int t = 0; t < 100; ++t) {
        std::mt19937_64 shapes(31000 + static_cast<std::uint64_t>(t));
        const Index n = 1 + static_cast<Index>(uniform_index(shapes, 32));
        const Index m = n + static_cast<Index>(uniform_index(shapes, 33));
        const Matrix a = random_matrix(m, n, 600 + static_cast<std::uint64_t>(t));
        const QrFactors f = qr_factor(a);
        CHECK((f.q * f.r_upper - a).norm() <= 1e-12 * std::max(1.0, a.norm()));
        CHECK((f.q.transpose() * f.q - Matrix::Identity(n, n)).norm() < 1e-10);
        // strictly triangular below the diagonal
        for (Index i = 1; i < n; ++i) {
            for (Index j = 0; j < i; ++j) CHECK(f.r_upper(i, j) == 0.0);
        }
    }
}

TEST_CASE("qr_factor rejects rank-deficient input") {
    Matrix a(4, 2);
    a.col(0) = Vector::LinSpaced(4, 1.0, 4.0);
    a.col(1) = 2.0 * a.col(0);
    CHECK_THROWS_AS(qr_factor(a), RankError);
}

TEST_CASE("project_out against a coordinate direction") {
    Matrix q(3, 1);
    q << 1, 0, 0;
    Matrix b(3, 1);
    b << 1, 1, 1;
    const Matrix out = project_out(q, b);
    CHECK(out(0, 0) == doctest::Approx(0.0));
    CHECK(out(1, 0) == doctest::Approx(1.0));
    CHECK(out(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("project_out with empty q is the identity") {
    const Matrix b = random_matrix(4, 3, 2);
    const Matrix q(4, 0);
    CHECK((project_out(q, b) - b).norm() == 0.0);
}

TEST_CASE("project_out is idempotent and annihilates range(Q)") {
    const Matrix q = random_orthonormal(10, 4, 11);
    const Matrix b = random_matrix(10, 6, 12);
    const Matrix once = project_out(q, b);
    const Matrix twice = project_out(q, once);
    CHECK((twice - once).norm() <= 1e-12 * std::max(1.0, b.norm()));
    CHECK((q.transpose() * once).norm() <= 1e-10 * b.norm());
}

TEST_CASE("project_out rejects mismatched shapes") {
    CHECK_THROWS_AS(project_out(random_orthonormal(5, 2, 1), random_matrix(4, 2, 1)),
                    DimensionError);
}

TEST_CASE("residual_norm_sq basics") {
    Matrix u(2, 1);
    u << 1, 0;
    Vector x(2);
    x << 3, 4;
    CHECK(residual_norm_sq(u, x) == doctest::Approx(16.0));

    // x inside range(u) gives zero
    Vector y(2);
    y << 5, 0;
    CHECK(residual_norm_sq(u, y) == doctest::Approx(0.0));
}

TEST_CASE("residual_norm_sq matches the explicit projector") {
    const Matrix u = random_orthonormal(8, 3, 5);
    std::mt19937_64 eng(5);
    for (int t = 0; t < 50; ++t) {
        Vector x(8);
        for (Index i = 0; i < 8; ++i) x(i) = uniform_real(eng, -2.0, 2.0);
        const double direct = (x - u * (u.transpose() * x)).squaredNorm();
        CHECK(residual_norm_sq(u, x) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("residual_norm_sq pythagoras identity") {
    std::mt19937_64 eng(77);
    for (int t = 0; t < 50; ++t) {
        const Index m = 2 + static_cast<Index>(uniform_index(eng, 30));
        const Index k = 1 + static_cast<Index>(uniform_index(eng, static_cast<std::size_t>(m)));
        const Matrix u = random_orthonormal(m, k, 3000 + static_cast<std::uint64_t>(t));
        Vector x(m);
        for (Index i = 0; i < m; ++i) x(i) = uniform_real(eng, -1.0, 1.0);
        const double captured = (u.transpose() * x).squaredNorm();
        const double total = x.squaredNorm();
        CHECK(residual_norm_sq(u, x) + captured ==
              doctest::Approx(total).epsilon(1e-10));
    }
}

TEST_CASE("spectral_norm and pinv_norm on a diagonal matrix") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    CHECK(spectral_norm(a) == doctest::Approx(3.0));
    CHECK(pinv_norm(a) == doctest::Approx(0.5));
}

TEST_CASE("spectral_norm and pinv_norm of orthonormal columns are 1") {
    const Matrix q = random_orthonormal(9, 4, 21);
    CHECK(spectral_norm(q) == doctest::Approx(1.0));
    CHECK(pinv_norm(q) == doctest::Approx(1.0));
}

TEST_CASE("spectral_norm and pinv_norm match the SVD oracle") {
    const Matrix a = random_matrix(7, 5, 13);
    const Vector s = singular_values(a);
    CHECK(spectral_norm(a) == doctest::Approx(s(0)).epsilon(1e-12));
    CHECK(pinv_norm(a) == doctest::Approx(1.0 / s(4)).epsilon(1e-12));
}

TEST_CASE("pinv_norm rejects rank-deficient input") {
    Matrix a(3, 2);
    a.col(0) = Vector::Ones(3);
    a.col(1) = Vector::Ones(3);
    CHECK_THROWS_AS(pinv_norm(a), RankError);
}

TEST_CASE("with_spectrum places singular values exactly") {
    const Matrix a = with_spectrum(6, 5, {4.0, 2.0, 0.5}, 9);
    const Vector s = singular_values(a);
    CHECK(s(0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(s(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s(3) < 1e-12);
}

TEST_CASE("require_finite flags NaN and Inf") {
    Matrix a = Matrix::Ones(2, 2);
    a(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(require_finite(a, "test"), ValidationError);
    a(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(require_finite(a, "test"), ValidationError);
    a(1, 0) = 0.0;
    CHECK_NOTHROW(require_finite(a, "test"));
}

TEST_CASE("numerical_rank of an exactly low-rank matrix") {
    const Matrix a = with_spectrum(10, 8, {3.0, 1.0, 0.2}, 17);
    CHECK(numerical_rank(a) == 3);
}
