#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace camel {

// Dense row-major matrix of doubles. Rows are contiguous, so the SIMD
// kernels operate on row spans; products transpose one operand internally
// to keep every inner loop contiguous.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    std::span<const double> row_span(std::size_t i) const { return {row(i), cols_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix transpose(const Matrix& a);

// a (m×k) · b (k×n)
Matrix matmul(const Matrix& a, const Matrix& b);
// a (m×k) · bᵀ where b is n×k
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// aᵀ · a (k×k) from a (n×k)
Matrix gram(const Matrix& a);
// rows of `a` selected by `rows`, in order
Matrix take_rows(const Matrix& a, std::span<const int> rows);

double frobenius_norm(const Matrix& a);
double frobenius_distance(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);

// LLᵀ factorization of a symmetric positive definite matrix. Stores both L
// and Lᵀ so forward and backward substitution walk contiguous rows. Solves
// run over the transposed right-hand side, giving n-length dot products per
// unknown instead of strided column accesses.
class Cholesky {
  public:
    Cholesky() = default;
    explicit Cholesky(const Matrix& a);  // throws DivergenceError if not SPD

    bool valid() const { return !lower_.empty(); }
    std::size_t dim() const { return lower_.rows(); }
    const Matrix& lower() const { return lower_; }

    std::vector<double> solve(std::span<const double> rhs) const;
    Matrix solve(const Matrix& rhs) const;  // rhs n×m, solved column-wise

  private:
    void solve_row_system(double* x, std::size_t n) const;

    Matrix lower_;
    Matrix lower_t_;
};

}  // namespace camel
