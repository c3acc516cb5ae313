#pragma once

#include <optional>
#include <vector>

#include "camel/matrix.hpp"

namespace camel {

// One ℓ₁-regularized reconstruction: minimize over w
//   (1/2)·||design·w - target||² + lambda·||w||₁
struct LassoProblem {
    Matrix design;               // n×(q-1)
    std::vector<double> target;  // length n
    double lambda = 0.0;
};

struct AdmmSettings {
    double rho = 1.0;
    double tol_abs = 1e-6;
    double tol_rel = 1e-4;
    int max_iter = 1000;
};

// Scaled-dual ADMM state. `z` is the reported solution: it is exactly
// sparse, and agrees with `coeffs` at convergence.
struct AdmmState {
    std::vector<double> coeffs;  // primal iterate
    std::vector<double> z;       // auxiliary iterate, exactly sparse
    std::vector<double> mu;      // scaled dual (the multiplier is rho*mu)
    double rho = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    // rho*(||r_k||² + ||z_k - z_{k-1}||²) per iteration; non-increasing
    std::vector<double> merit_history;
};

// sign(a)·max(|a| - omega, 0); throws InputError for omega < 0.
double soft_threshold(double a, double omega);
void soft_threshold(std::span<const double> in, double omega, std::span<double> out);

// (1/100)·max_j |targetᵀ·design_j|
double lambda_heuristic(std::span<const double> target, const Matrix& design);

AdmmState admm_lasso(const LassoProblem& problem, const AdmmSettings& settings);

struct ColumnSolveInfo {
    double lambda = 0.0;
    int iterations = 0;
    bool converged = false;
    bool constant_label = false;  // the target column was all +1 or all -1
};

struct CorrelationLearning {
    Matrix s;  // q×q, zero diagonal
    std::vector<ColumnSolveInfo> columns;
    bool all_converged = false;
};

// Solves the reconstruction for every label column; column j of `s` holds
// the sparse solution scattered into the q-1 off-diagonal slots. lambda
// defaults to the per-column heuristic unless overridden.
CorrelationLearning learn_correlation_matrix(const Matrix& labels, const AdmmSettings& settings,
                                             std::optional<double> lambda_override = {},
                                             int jobs = 1);

struct CorrelationModel {
    Matrix s;            // q×q, zero diagonal
    double alpha = 0.0;  // collaboration degree in [0,1]
    Matrix g;            // (1-alpha)·I + alpha·S
};

CorrelationModel build_collaboration_matrix(const Matrix& s, double alpha);

}  // namespace camel
