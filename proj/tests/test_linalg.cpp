#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "alphamax/matrix.hpp"
#include "helpers.hpp"

using namespace alphamax;
using test_helpers::jacobi_oracle;
using test_helpers::random_spd;
using test_helpers::random_symmetric;

TEST_CASE("Matrix constructors validate shape and finiteness") {
    CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), InvalidArgumentError);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::nan("")}), InvalidArgumentError);
    CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}),
                    InvalidArgumentError);
    const Matrix m(2, 3);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    for (double v : m.data()) CHECK(v == 0.0);
}

TEST_CASE("solve_spd identity and diagonal cases") {
    const Matrix i2 = Matrix::identity(2);
    const Matrix b(2, 1, {3.0, -1.0});
    const Matrix x = solve_spd(i2, b);
    CHECK(x(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(x(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));

    const Matrix d(2, 2, {2.0, 0.0, 0.0, 4.0});
    const Matrix b2(2, 1, {2.0, 8.0});
    const Matrix x2 = solve_spd(d, b2);
    CHECK(x2(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x2(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("solve_spd recovers a known solution of a random SPD system") {
    const Matrix a = random_spd(5, 11);
    Matrix x_true(5, 2);
    const StreamKey key = StreamKey::root(12);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 2; ++j) x_true(i, j) = gaussian_at(key, i * 2 + j);
    const Matrix b = a.times(x_true);
    const Matrix x = solve_spd(a, b);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(x(i, j) == doctest::Approx(x_true(i, j)).epsilon(1e-9));
}

TEST_CASE("solve_spd multiply-back residual over randomized SPD systems") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 2 + seed % 7;
        const Matrix a = random_spd(n, 100 + seed);
        Matrix b(n, 1);
        const StreamKey key = StreamKey::root(200 + seed);
        for (std::size_t i = 0; i < n; ++i) b(i, 0) = gaussian_at(key, i);
        const Matrix x = solve_spd(a, b);
        const Matrix back = a.times(x);
        double err = 0.0;
        double bnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err += (back(i, 0) - b(i, 0)) * (back(i, 0) - b(i, 0));
            bnorm += b(i, 0) * b(i, 0);
        }
        CHECK(std::sqrt(err) <= 1e-10 * (1.0 + std::sqrt(bnorm)));
    }
}

TEST_CASE("solve_spd flags singular input") {
    // Rank-1 matrix: second pivot collapses.
    const Matrix a(2, 2, {1.0, 1.0, 1.0, 1.0});
    CHECK_THROWS_AS(solve_spd(a, Matrix::identity(2)), SingularMatrixError);
    CHECK_THROWS_AS(solve_spd(Matrix(2, 2), Matrix::identity(2)), SingularMatrixError);
}

TEST_CASE("top_k_eigen on a diagonal matrix") {
    const Matrix a(3, 3, {5.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 1.0});
    const EigenPairs eig = top_k_eigen(a, 2);
    REQUIRE(eig.values.size() == 2);
    CHECK(eig.values[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(eig.vectors(0, 0)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(eig.vectors(1, 1)) == doctest::Approx(1.0).epsilon(1e-10));
    // Sign convention: the dominant entry is positive.
    CHECK(eig.vectors(0, 0) > 0.0);
    CHECK(eig.vectors(1, 1) > 0.0);
}

TEST_CASE("top_k_eigen on a rank-1 outer product") {
    const std::size_t n = 12;
    std::vector<double> beta(n);
    const StreamKey key = StreamKey::root(21);
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        beta[i] = 1.0 + uniform01(key, i);
        norm2 += beta[i] * beta[i];
    }
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = beta[i] * beta[j] / static_cast<double>(n);
    const EigenPairs eig = top_k_eigen(a, 1);
    CHECK(eig.values[0] == doctest::Approx(norm2 / static_cast<double>(n)).epsilon(1e-10));
    const double scale = std::sqrt(norm2);
    for (std::size_t i = 0; i < n; ++i)
        CHECK(eig.vectors(i, 0) == doctest::Approx(beta[i] / scale).epsilon(1e-8));
}

TEST_CASE("top_k_eigen matches the independent Jacobi oracle (small path)") {
    const Matrix a = random_symmetric(8, 31);
    const EigenPairs eig = top_k_eigen(a, 3);
    const auto oracle = jacobi_oracle(a);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(eig.values[j] == doctest::Approx(oracle.values[j]).epsilon(1e-8));
        // Compare directions via |cosine| to stay sign-agnostic.
        double dot = 0.0;
        for (std::size_t i = 0; i < 8; ++i) dot += eig.vectors(i, j) * oracle.vectors(i, j);
        CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("top_k_eigen matches the oracle on the tridiagonal-QL path") {
    const std::size_t n = 80;  // above the Jacobi cutoff
    const Matrix a = random_symmetric(n, 32);
    const EigenPairs eig = top_k_eigen(a, 5);
    const auto oracle = jacobi_oracle(a);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(eig.values[j] == doctest::Approx(oracle.values[j]).epsilon(1e-8));
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += eig.vectors(i, j) * oracle.vectors(i, j);
        CHECK(std::abs(dot) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("eigenvalue sum for k = N equals the trace") {
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        const std::size_t n = 10 + 3 * seed;
        const Matrix a = random_symmetric(n, 40 + seed);
        const EigenPairs eig = top_k_eigen(a, n);
        double sum = 0.0;
        for (double v : eig.values) sum += v;
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
        CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
    }
}

TEST_CASE("eigen residual certificate holds on both paths") {
    for (std::size_t n : {16u, 90u}) {
        const Matrix a = random_symmetric(n, 50 + n);
        const EigenPairs eig = top_k_eigen(a, 4);
        const double fro = a.frobenius_norm();
        for (std::size_t j = 0; j < 4; ++j) {
            double r2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double av = 0.0;
                for (std::size_t l = 0; l < n; ++l) av += a(i, l) * eig.vectors(l, j);
                const double r = av - eig.values[j] * eig.vectors(i, j);
                r2 += r * r;
            }
            CHECK(std::sqrt(r2) <= 1e-8 * (1.0 + std::abs(eig.values[j])) * fro);
        }
    }
}

TEST_CASE("eigen output is descending and bit-stable across calls") {
    const Matrix a = random_symmetric(20, 61);
    const EigenPairs first = top_k_eigen(a, 20);
    for (std::size_t j = 1; j < first.values.size(); ++j)
        CHECK(first.values[j - 1] >= first.values[j]);
    const EigenPairs second = top_k_eigen(a, 20);
    CHECK(first.values == second.values);
    CHECK(first.vectors == second.vectors);
}

TEST_CASE("top_k_eigen rejects bad k") {
    const Matrix a = Matrix::identity(4);
    CHECK_THROWS_AS(top_k_eigen(a, 0), InvalidKError);
    CHECK_THROWS_AS(top_k_eigen(a, 5), InvalidKError);
}
