#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "camel/errors.hpp"
#include "camel/matrix.hpp"
#include "testutil.hpp"

using namespace camel;

namespace {

Matrix naive_matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < a.cols(); ++l) acc += a(i, l) * b(l, j);
            c(i, j) = acc;
        }
    return c;
}

Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
    Matrix a = testutil::random_matrix(n, n, rng);
    Matrix spd = gram(a);
    for (std::size_t i = 0; i < n; ++i) spd(i, i) += static_cast<double>(n);
    return spd;
}

}  // namespace

TEST_CASE("matmul matches the naive triple loop") {
    std::mt19937_64 rng(21);
    for (auto [m, k, n] : {std::tuple<int, int, int>{1, 1, 1}, {3, 5, 2}, {7, 13, 9}, {20, 6, 20}}) {
        Matrix a = testutil::random_matrix(m, k, rng);
        Matrix b = testutil::random_matrix(k, n, rng);
        Matrix c = matmul(a, b);
        Matrix ref = naive_matmul(a, b);
        CHECK(frobenius_distance(c, ref) < 1e-12);

        Matrix cnt = matmul_nt(a, transpose(b));
        CHECK(testutil::bitwise_equal(c, cnt));
    }
    CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), InputError);
}

TEST_CASE("gram equals AᵀA and is symmetric") {
    std::mt19937_64 rng(22);
    Matrix a = testutil::random_matrix(9, 4, rng);
    Matrix g = gram(a);
    Matrix ref = naive_matmul(transpose(a), a);
    CHECK(frobenius_distance(g, ref) < 1e-12);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) CHECK(g(i, j) == g(j, i));
}

TEST_CASE("transpose and take_rows") {
    std::mt19937_64 rng(23);
    Matrix a = testutil::random_matrix(4, 6, rng);
    Matrix t = transpose(a);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) CHECK(t(j, i) == a(i, j));

    const int rows[] = {3, 0, 2};
    Matrix sel = take_rows(a, rows);
    CHECK(sel.rows() == 3);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        CHECK(sel(0, j) == a(3, j));
        CHECK(sel(1, j) == a(0, j));
        CHECK(sel(2, j) == a(2, j));
    }
    const int bad[] = {4};
    CHECK_THROWS_AS(take_rows(a, bad), InputError);
}

TEST_CASE("cholesky solves SPD systems") {
    std::mt19937_64 rng(24);
    for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
        Matrix h = random_spd(n, rng);
        Cholesky chol(h);

        // single RHS
        std::vector<double> b(n);
        for (auto& v : b) v = std::uniform_real_distribution<double>(-2, 2)(rng);
        auto x = chol.solve(b);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += h(i, j) * x[j];
            CHECK(acc == doctest::Approx(b[i]).epsilon(1e-10));
        }

        // multi RHS agrees with column-by-column solves
        Matrix rhs = testutil::random_matrix(n, 3, rng);
        Matrix sol = chol.solve(rhs);
        for (std::size_t c = 0; c < 3; ++c) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = rhs(i, c);
            auto xc = chol.solve(col);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(sol(i, c) == doctest::Approx(xc[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("cholesky rejects non-SPD and NaN input") {
    Matrix indefinite(2, 2);
    indefinite(0, 0) = 1.0;
    indefinite(0, 1) = 2.0;
    indefinite(1, 0) = 2.0;
    indefinite(1, 1) = 1.0;
    CHECK_THROWS_AS(Cholesky{indefinite}, DivergenceError);

    Matrix nan_mat(2, 2, 1.0);
    nan_mat(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Cholesky{nan_mat}, DivergenceError);

    CHECK_THROWS_AS(Cholesky{Matrix(2, 3)}, InputError);
}

TEST_CASE("norms") {
    Matrix a(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = -4.0;
    CHECK(frobenius_norm(a) == doctest::Approx(5.0));
    CHECK(max_abs(a) == 4.0);
    CHECK(frobenius_distance(a, a) == 0.0);
}
