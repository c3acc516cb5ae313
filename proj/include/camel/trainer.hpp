#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "camel/correlation.hpp"
#include "camel/dataset.hpp"
#include "camel/matrix.hpp"

namespace camel {

struct KernelSpec {
    double bandwidth = 1.0;  // sigma of exp(-||x-y||²/(2·sigma²))
};

struct TrainerConfig {
    double lambda1 = 1.0;   // embedding-fit weight
    double lambda2 = 1.0;   // model-complexity weight
    double alpha = 0.0;     // collaboration degree, recorded alongside G
    double outer_tol = 1e-6;
    int max_outer_iter = 50;
    AdmmSettings admm;      // pass-through for correlation learning
};

// Mean Euclidean distance over all unordered pairs of instances.
// Throws InputError for n < 2 or when all instances coincide.
double gaussian_bandwidth(const Matrix& features);

// Symmetric n×n Gaussian kernel matrix with unit diagonal.
Matrix kernel_matrix(const Matrix& features, const KernelSpec& spec);
// m×n matrix with entry (i,j) = K(test_i, train_j).
Matrix cross_kernel(const Matrix& train, const Matrix& test, const KernelSpec& spec);

// Precomputations reusable across fits that share training features.
struct KernelContext {
    KernelSpec spec;
    Matrix kernel;
};
std::shared_ptr<const KernelContext> make_kernel_context(const Matrix& features);

// Adds the lambda2-dependent factorization of H = (1/lambda2)·K + I, shared
// by the bias and dual-coefficient updates across all outer iterations.
struct RidgeContext {
    double lambda2 = 1.0;
    Cholesky h_factor;
    std::vector<double> h_inv_ones;  // H⁻¹·1
    double h_inv_ones_sum = 0.0;     // 1ᵀ·H⁻¹·1
};
std::shared_ptr<const RidgeContext> make_ridge_context(const Matrix& kernel, double lambda2);

struct TrainerState {
    Matrix embedding;            // Z (n×q)
    Matrix dual_coeffs;          // A (n×q)
    std::vector<double> bias;    // b (q)
    Matrix outputs;              // T = (1/lambda2)·K·A + 1·bᵀ
    Matrix residual;             // E = Z - T
    std::shared_ptr<const KernelContext> kernel_ctx;
    std::shared_ptr<const RidgeContext> ridge_ctx;
    std::vector<double> delta_z_history;
    std::vector<double> objective_history;
};

// Closed-form minimizer of the (b, A) subproblem for the current Z:
//   bᵀ = (1ᵀH⁻¹Z)/(1ᵀH⁻¹1),  A = H⁻¹(Z - 1bᵀ).
// Afterwards every column of A sums to zero.
void update_model_params(TrainerState& state, const TrainerConfig& config);

// T = (1/lambda2)·K·A + 1·bᵀ, and refreshes E = Z - T.
void compute_outputs(TrainerState& state, const TrainerConfig& config);

// Closed-form minimizer of (1/2)||Z-T||² + (lambda1/2)||ZG-Y||²:
//   Z = (T + lambda1·Y·Gᵀ)(I + lambda1·G·Gᵀ)⁻¹.
Matrix update_embedding(const Matrix& outputs, const Matrix& labels, const Matrix& g,
                        double lambda1);

// (1/2)||E||² + (lambda1/2)||ZG-Y||² + (1/(2·lambda2))·tr(AᵀKA).
// Throws DivergenceError if the value is not finite.
double objective_value(const TrainerState& state, const TrainerConfig& config,
                       const Matrix& labels, const Matrix& g);

struct FitDiagnostics {
    std::vector<double> delta_z_history;
    std::vector<double> objective_history;
    int iterations = 0;
    bool converged = false;
};

struct TrainedModel {
    Matrix dual_coeffs;          // A (n×q)
    std::vector<double> bias;    // b (q)
    KernelSpec kernel;
    Matrix train_features;       // n×d
    Matrix g;                    // collaboration matrix (q×q)
    double alpha = 0.0;
    TrainerConfig config;
    FitDiagnostics diagnostics;
};

// Alternates the closed-form updates from Z = Y until the Frobenius change
// of Z drops below config.outer_tol or max_outer_iter is reached.
TrainedModel fit(const Dataset& ds, const CorrelationModel& correlation,
                 const TrainerConfig& config);

// Same, with the kernel and ridge precomputations supplied by the caller.
TrainedModel fit_with_context(const Matrix& features, const Matrix& labels, const Matrix& g,
                              double alpha, const TrainerConfig& config,
                              std::shared_ptr<const KernelContext> kernel_ctx,
                              std::shared_ptr<const RidgeContext> ridge_ctx);

// Row r holds Gᵀ·(raw output of test instance r), with the raw output
// (1/lambda2)·Σ_i K(x, x_i)·A_i + b.
Matrix predict_scores(const TrainedModel& model, const Matrix& test);

// Elementwise sign of predict_scores; sign(0) maps to -1.
Matrix predict_labels(const TrainedModel& model, const Matrix& test);

// Scores from a precomputed m×n cross-kernel block.
Matrix predict_scores_prepared(const Matrix& cross, const Matrix& dual_coeffs,
                               std::span<const double> bias, double lambda2, const Matrix& g);

Matrix signs_of(const Matrix& scores);

// Versioned self-describing text format; reloading reproduces predictions
// bitwise.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace camel
