#include "camel/matrix.hpp"

#include <cmath>
#include <string>

#include "camel/errors.hpp"
#include "camel/simd.hpp"

namespace camel {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions disagree");
    return matmul_nt(a, transpose(b));
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "matmul_nt: inner dimensions disagree");
    const auto& k = simd::active_kernels();
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) ci[j] = k.dot(ai, b.row(j), a.cols());
    }
    return c;
}

Matrix gram(const Matrix& a) {
    const auto& k = simd::active_kernels();
    const Matrix at = transpose(a);
    const std::size_t m = at.rows();
    Matrix g(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            const double v = k.dot(at.row(i), at.row(j), at.cols());
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    return g;
}

Matrix take_rows(const Matrix& a, std::span<const int> rows) {
    Matrix out(rows.size(), a.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto r = static_cast<std::size_t>(rows[i]);
        require(rows[i] >= 0 && r < a.rows(), "take_rows: index out of range");
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(r, j);
    }
    return out;
}

double frobenius_norm(const Matrix& a) {
    return std::sqrt(simd::active_kernels().dot(a.data(), a.data(), a.size()));
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "frobenius_distance: shape mismatch");
    return std::sqrt(simd::active_kernels().squared_distance(a.data(), b.data(), a.size()));
}

double max_abs(const Matrix& a) {
    return simd::active_kernels().max_abs(a.data(), a.size());
}

Cholesky::Cholesky(const Matrix& a) {
    require(a.rows() == a.cols(), "cholesky: matrix must be square");
    const auto& k = simd::active_kernels();
    const std::size_t n = a.rows();
    lower_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double d = a(j, j) - k.dot(lower_.row(j), lower_.row(j), j);
        if (!std::isfinite(d) || d <= 0.0)
            throw DivergenceError("cholesky: matrix is not positive definite (pivot " +
                                  std::to_string(j) + ")");
        const double ljj = std::sqrt(d);
        lower_(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i)
            lower_(i, j) = (a(i, j) - k.dot(lower_.row(i), lower_.row(j), j)) / ljj;
    }
    lower_t_ = transpose(lower_);
}

// Solves L Lᵀ y = x in place for one right-hand side laid out as a row.
void Cholesky::solve_row_system(double* x, std::size_t n) const {
    const auto& k = simd::active_kernels();
    for (std::size_t i = 0; i < n; ++i)
        x[i] = (x[i] - k.dot(x, lower_.row(i), i)) / lower_(i, i);
    for (std::size_t ii = n; ii-- > 0;) {
        const std::size_t tail = n - ii - 1;
        x[ii] = (x[ii] - k.dot(x + ii + 1, lower_t_.row(ii) + ii + 1, tail)) / lower_(ii, ii);
    }
}

std::vector<double> Cholesky::solve(std::span<const double> rhs) const {
    require(valid() && rhs.size() == dim(), "cholesky solve: bad right-hand side");
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_row_system(x.data(), x.size());
    return x;
}

Matrix Cholesky::solve(const Matrix& rhs) const {
    require(valid() && rhs.rows() == dim(), "cholesky solve: bad right-hand side");
    Matrix xt = transpose(rhs);
    for (std::size_t s = 0; s < xt.rows(); ++s) solve_row_system(xt.row(s), xt.cols());
    return transpose(xt);
}

}  // namespace camel
