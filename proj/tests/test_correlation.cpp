#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "camel/correlation.hpp"
#include "camel/errors.hpp"
#include "oracle/oracle.hpp"
#include "testutil.hpp"

using namespace camel;

namespace {

const AdmmSettings kTight{1.0, 1e-10, 1e-10, 50000};

LassoProblem random_pm1_problem(std::size_t n, std::size_t q, std::mt19937_64& rng) {
    Matrix labels = testutil::random_pm1(n, q, rng);
    LassoProblem p;
    p.design = Matrix(n, q - 1);
    p.target.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        p.target[i] = labels(i, 0);
        for (std::size_t j = 1; j < q; ++j) p.design(i, j - 1) = labels(i, j);
    }
    p.lambda = lambda_heuristic(p.target, p.design);
    return p;
}

std::vector<double> gradient_at(const LassoProblem& p, const std::vector<double>& z) {
    // Xᵀ(Xz - y) by plain loops
    const Matrix& x = p.design;
    std::vector<double> fit(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) fit[i] += x(i, j) * z[j];
        fit[i] -= p.target[i];
    }
    std::vector<double> g(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j)
        for (std::size_t i = 0; i < x.rows(); ++i) g[j] += x(i, j) * fit[i];
    return g;
}

void check_kkt(const LassoProblem& p, const std::vector<double>& z, double eps) {
    const auto g = gradient_at(p, z);
    for (std::size_t j = 0; j < g.size(); ++j) {
        CHECK(std::fabs(g[j]) <= p.lambda + eps);
        if (z[j] != 0.0) CHECK(std::fabs(g[j] + p.lambda * (z[j] > 0 ? 1.0 : -1.0)) <= eps);
    }
}

std::size_t nonzeros(const std::vector<double>& v) {
    std::size_t c = 0;
    for (double x : v)
        if (x != 0.0) ++c;
    return c;
}

}  // namespace

TEST_CASE("soft_threshold scalar cases") {
    CHECK(soft_threshold(3.0, 1.0) == 2.0);
    CHECK(soft_threshold(-0.5, 1.0) == 0.0);
    CHECK(soft_threshold(-2.0, 0.5) == -1.5);
    CHECK(soft_threshold(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(soft_threshold(1.0, -0.1), InputError);
}

TEST_CASE("soft_threshold vector form matches the scalar map") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::vector<double> in(97), out(97);
    for (auto& v : in) v = dist(rng);
    soft_threshold(in, 0.75, out);
    for (std::size_t i = 0; i < in.size(); ++i) CHECK(out[i] == soft_threshold(in[i], 0.75));
    std::vector<double> wrong(5);
    CHECK_THROWS_AS(soft_threshold(in, -1.0, out), InputError);
    CHECK_THROWS_AS(soft_threshold(in, 1.0, wrong), InputError);
}

TEST_CASE("lambda_heuristic") {
    SUBCASE("column identical to the target, n=10") {
        Matrix design(10, 1, 0.0);
        std::vector<double> target(10, 1.0);
        for (std::size_t i = 0; i < 10; ++i) design(i, 0) = 1.0;
        CHECK(lambda_heuristic(target, design) == doctest::Approx(0.1));
    }
    SUBCASE("orthogonal columns give zero") {
        // rows of a 4x4 Hadamard block; first column is the target
        const double h[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
        Matrix design(4, 3);
        std::vector<double> target(4);
        for (int i = 0; i < 4; ++i) {
            target[i] = h[i][0];
            for (int j = 1; j < 4; ++j) design(i, j - 1) = h[i][j];
        }
        CHECK(lambda_heuristic(target, design) == 0.0);
    }
    SUBCASE("random ±1 instance matches brute force") {
        std::mt19937_64 rng(42);
        LassoProblem p = random_pm1_problem(8, 4, rng);
        double best = 0.0;
        for (std::size_t j = 0; j < p.design.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < p.design.rows(); ++i)
                acc += p.target[i] * p.design(i, j);
            best = std::max(best, std::fabs(acc));
        }
        CHECK(lambda_heuristic(p.target, p.design) == doctest::Approx(best / 100.0));
    }
}

TEST_CASE("admm_lasso zero condition") {
    std::mt19937_64 rng(43);
    LassoProblem p = random_pm1_problem(12, 5, rng);
    double atb_inf = 100.0 * lambda_heuristic(p.target, p.design);  // ||Xᵀy||∞

    SUBCASE("strictly above the threshold the solution is exactly zero") {
        p.lambda = 1.5 * atb_inf;
        AdmmState st = admm_lasso(p, kTight);
        CHECK(st.converged);
        for (double v : st.z) CHECK(v == 0.0);
    }
    SUBCASE("at the threshold the solution vanishes to tolerance") {
        p.lambda = atb_inf;
        AdmmState st = admm_lasso(p, kTight);
        double mx = 0.0;
        for (double v : st.z) mx = std::max(mx, std::fabs(v));
        CHECK(mx <= 1e-8);
    }
}

TEST_CASE("admm_lasso scalar closed form") {
    // single column equal to the target: minimizer is 1 - lambda/n
    const std::size_t n = 10;
    LassoProblem p;
    p.design = Matrix(n, 1, 0.0);
    p.target.assign(n, 0.0);
    std::mt19937_64 rng(44);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = (rng() & 1) ? 1.0 : -1.0;
        p.design(i, 0) = v;
        p.target[i] = v;
    }
    p.lambda = 0.1;
    AdmmState st = admm_lasso(p, kTight);
    CHECK(st.converged);
    CHECK(st.z[0] == doctest::Approx(1.0 - 0.1 / n).epsilon(1e-8));
    CHECK(st.coeffs[0] == doctest::Approx(st.z[0]).epsilon(1e-8));
}

TEST_CASE("admm_lasso agrees with the coordinate-descent oracle") {
    std::mt19937_64 rng(45);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 8 + rng() % 23;  // up to 30
        const std::size_t q = 3 + rng() % 8;   // up to 10
        LassoProblem p = random_pm1_problem(n, q, rng);
        AdmmState st = admm_lasso(p, kTight);
        REQUIRE(st.converged);
        auto cd = oracle::lasso_coordinate_descent(p, 1e-13, 200000);
        REQUIRE(cd.converged);
        const double gap = std::fabs(oracle::lasso_objective(p, st.z) -
                                     oracle::lasso_objective(p, cd.coeffs));
        CHECK(gap <= 1e-6);
    }
}

TEST_CASE("admm_lasso satisfies the lasso KKT conditions at convergence") {
    std::mt19937_64 rng(46);
    for (int trial = 0; trial < 8; ++trial) {
        LassoProblem p = random_pm1_problem(20, 6, rng);
        AdmmState st = admm_lasso(p, kTight);
        REQUIRE(st.converged);
        check_kkt(p, st.z, 1e-5);
    }
}

TEST_CASE("admm_lasso merit is non-increasing") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 6; ++trial) {
        LassoProblem p = random_pm1_problem(30, 8, rng);
        AdmmState st = admm_lasso(p, AdmmSettings{1.0, 1e-8, 1e-8, 5000});
        for (std::size_t k = 1; k < st.merit_history.size(); ++k)
            CHECK(st.merit_history[k] <= st.merit_history[k - 1] + 1e-9);
    }
}

TEST_CASE("increasing lambda never grows the support") {
    std::mt19937_64 rng(48);
    for (int trial = 0; trial < 5; ++trial) {
        LassoProblem p = random_pm1_problem(24, 7, rng);
        const double base = p.lambda;
        std::size_t prev = SIZE_MAX;
        for (double f : {0.5, 1.0, 2.0, 4.0}) {
            p.lambda = base * f;
            AdmmState st = admm_lasso(p, kTight);
            REQUIRE(st.converged);
            const std::size_t nnz = nonzeros(st.z);
            CHECK(nnz <= prev);
            prev = nnz;
        }
    }
}

TEST_CASE("admm_lasso argument checks and non-convergence flag") {
    std::mt19937_64 rng(49);
    LassoProblem p = random_pm1_problem(10, 4, rng);
    CHECK_THROWS_AS(admm_lasso(p, AdmmSettings{0.0, 1e-6, 1e-4, 10}), InputError);
    CHECK_THROWS_AS(admm_lasso(p, AdmmSettings{1.0, 1e-6, 1e-4, 0}), InputError);

    AdmmState st = admm_lasso(p, AdmmSettings{1.0, 1e-14, 1e-14, 1});
    CHECK(!st.converged);
    CHECK(st.iterations == 1);
}

TEST_CASE("learn_correlation_matrix") {
    SUBCASE("two identical label columns give the scalar closed form") {
        Matrix labels(10, 2);
        std::mt19937_64 rng(50);
        for (std::size_t i = 0; i < 10; ++i) {
            const double v = (rng() & 1) ? 1.0 : -1.0;
            labels(i, 0) = v;
            labels(i, 1) = v;
        }
        // heuristic lambda is n/100 = 0.1 here
        CorrelationLearning out = learn_correlation_matrix(labels, kTight);
        CHECK(out.all_converged);
        CHECK(out.columns[0].lambda == doctest::Approx(0.1));
        CHECK(out.s(0, 0) == 0.0);
        CHECK(out.s(1, 1) == 0.0);
        CHECK(out.s(1, 0) == doctest::Approx(0.99).epsilon(1e-7));
        CHECK(out.s(0, 1) == doctest::Approx(0.99).epsilon(1e-7));
    }
    SUBCASE("mutually orthogonal columns solve pure least squares") {
        const double h[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
        Matrix labels(8, 4);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 4; ++j) labels(i, j) = h[i % 4][j];
        CorrelationLearning out = learn_correlation_matrix(labels, kTight);
        for (std::size_t j = 0; j < 4; ++j) CHECK(out.columns[j].lambda == 0.0);
        // orthogonal design + zero lambda: least-squares solution is 0
        CHECK(max_abs(out.s) <= 1e-7);
    }
    SUBCASE("columns match standalone admm_lasso solves") {
        std::mt19937_64 rng(51);
        Matrix labels = testutil::random_pm1(12, 4, rng);
        CorrelationLearning out = learn_correlation_matrix(labels, kTight, {}, 2);
        for (std::size_t j = 0; j < 4; ++j) {
            LassoProblem p;
            p.design = Matrix(12, 3);
            p.target.resize(12);
            for (std::size_t i = 0; i < 12; ++i) {
                p.target[i] = labels(i, j);
                std::size_t c = 0;
                for (std::size_t l = 0; l < 4; ++l)
                    if (l != j) p.design(i, c++) = labels(i, l);
            }
            p.lambda = lambda_heuristic(p.target, p.design);
            AdmmState st = admm_lasso(p, kTight);
            std::size_t c = 0;
            for (std::size_t l = 0; l < 4; ++l) {
                if (l == j) continue;
                CHECK(out.s(l, j) == st.z[c++]);  // identical code path, identical bits
            }
        }
    }
    SUBCASE("constant label columns are solved and flagged") {
        std::mt19937_64 rng(52);
        Matrix labels = testutil::random_labels(10, 3, rng);
        for (std::size_t i = 0; i < 10; ++i) labels(i, 1) = 1.0;
        CorrelationLearning out = learn_correlation_matrix(labels, kTight);
        CHECK(out.columns[1].constant_label);
        CHECK(!out.columns[0].constant_label);
    }
    SUBCASE("needs q >= 2") {
        CHECK_THROWS_AS(learn_correlation_matrix(Matrix(5, 1, 1.0), kTight), InputError);
    }
}

TEST_CASE("build_collaboration_matrix") {
    Matrix s(2, 2);
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;

    SUBCASE("alpha 0 gives the identity") {
        CorrelationModel m = build_collaboration_matrix(s, 0.0);
        CHECK(m.g == Matrix::identity(2));
    }
    SUBCASE("alpha 1 gives S") {
        CorrelationModel m = build_collaboration_matrix(s, 1.0);
        CHECK(m.g == s);
    }
    SUBCASE("alpha 0.5 blends entrywise") {
        CorrelationModel m = build_collaboration_matrix(s, 0.5);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) CHECK(m.g(i, j) == 0.5);
    }
    SUBCASE("entrywise identity holds to machine precision") {
        std::mt19937_64 rng(53);
        Matrix r = testutil::random_matrix(5, 5, rng);
        for (std::size_t i = 0; i < 5; ++i) r(i, i) = 0.0;
        const double alpha = 0.37;
        CorrelationModel m = build_collaboration_matrix(r, alpha);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) {
                const double expect = (1.0 - alpha) * (i == j ? 1.0 : 0.0) + alpha * r(i, j);
                CHECK(std::fabs(m.g(i, j) - expect) <= 1e-15);
            }
    }
    SUBCASE("rejects bad input") {
        CHECK_THROWS_AS(build_collaboration_matrix(s, -0.1), InputError);
        CHECK_THROWS_AS(build_collaboration_matrix(s, 1.1), InputError);
        Matrix bad = s;
        bad(0, 0) = 0.5;
        CHECK_THROWS_AS(build_collaboration_matrix(bad, 0.5), InputError);
        CHECK_THROWS_AS(build_collaboration_matrix(Matrix(2, 3), 0.5), InputError);
    }
}
