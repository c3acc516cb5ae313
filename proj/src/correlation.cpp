#include "camel/correlation.hpp"

#include <cmath>
#include <string>

#include "camel/errors.hpp"
#include "camel/parallel.hpp"
#include "camel/simd.hpp"

namespace camel {

namespace {

double norm2(std::span<const double> v) {
    return std::sqrt(simd::active_kernels().dot(v.data(), v.data(), v.size()));
}

}  // namespace

double soft_threshold(double a, double omega) {
    if (omega < 0.0) throw InputError("soft_threshold: omega must be nonnegative");
    const double mag = std::fabs(a) - omega;
    return mag > 0.0 ? std::copysign(mag, a) : 0.0;
}

void soft_threshold(std::span<const double> in, double omega, std::span<double> out) {
    if (omega < 0.0) throw InputError("soft_threshold: omega must be nonnegative");
    if (in.size() != out.size()) throw InputError("soft_threshold: size mismatch");
    simd::active_kernels().soft_threshold(in.data(), omega, out.data(), in.size());
}

double lambda_heuristic(std::span<const double> target, const Matrix& design) {
    if (design.rows() != target.size())
        throw InputError("lambda_heuristic: design rows must match target length");
    const auto& k = simd::active_kernels();
    std::vector<double> corr(design.cols(), 0.0);
    for (std::size_t i = 0; i < design.rows(); ++i)
        k.axpy(target[i], design.row(i), corr.data(), corr.size());
    return k.max_abs(corr.data(), corr.size()) / 100.0;
}

AdmmState admm_lasso(const LassoProblem& problem, const AdmmSettings& settings) {
    if (settings.rho <= 0.0) throw InputError("admm_lasso: rho must be positive");
    if (settings.max_iter < 1) throw InputError("admm_lasso: max_iter must be at least 1");
    if (problem.lambda < 0.0) throw InputError("admm_lasso: lambda must be nonnegative");
    if (problem.design.rows() != problem.target.size())
        throw InputError("admm_lasso: design rows must match target length");

    const auto& kern = simd::active_kernels();
    const std::size_t m = problem.design.cols();
    const double rho = settings.rho;

    // The normal matrix designᵀ·design + rho·I is iteration-independent;
    // factor it once and reuse across iterations.
    Matrix normal = gram(problem.design);
    for (std::size_t i = 0; i < m; ++i) normal(i, i) += rho;
    const Cholesky factor(normal);

    std::vector<double> atb(m, 0.0);
    for (std::size_t i = 0; i < problem.design.rows(); ++i)
        kern.axpy(problem.target[i], problem.design.row(i), atb.data(), m);

    AdmmState state;
    state.rho = rho;
    state.coeffs.assign(m, 0.0);
    state.z.assign(m, 0.0);
    state.mu.assign(m, 0.0);
    state.merit_history.reserve(16);

    const double sqrt_m = std::sqrt(static_cast<double>(m));
    std::vector<double> rhs(m), z_prev(m), diff(m);

    for (int iter = 1; iter <= settings.max_iter; ++iter) {
        for (std::size_t i = 0; i < m; ++i)
            rhs[i] = atb[i] + rho * (state.z[i] - state.mu[i]);
        state.coeffs = factor.solve(rhs);

        z_prev = state.z;
        for (std::size_t i = 0; i < m; ++i) diff[i] = state.coeffs[i] + state.mu[i];
        kern.soft_threshold(diff.data(), problem.lambda / rho, state.z.data(), m);

        for (std::size_t i = 0; i < m; ++i) state.mu[i] += state.coeffs[i] - state.z[i];

        for (std::size_t i = 0; i < m; ++i) diff[i] = state.coeffs[i] - state.z[i];
        state.primal_residual = norm2(diff);
        double z_step_sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = state.z[i] - z_prev[i];
            z_step_sq += d * d;
        }
        state.dual_residual = rho * std::sqrt(z_step_sq);
        state.iterations = iter;
        state.merit_history.push_back(
            rho * (state.primal_residual * state.primal_residual + z_step_sq));

        const double eps_primal = settings.tol_abs * sqrt_m +
                                  settings.tol_rel * std::max(norm2(state.coeffs), norm2(state.z));
        const double eps_dual =
            settings.tol_abs * sqrt_m + settings.tol_rel * rho * norm2(state.mu);
        if (state.primal_residual <= eps_primal && state.dual_residual <= eps_dual) {
            state.converged = true;
            break;
        }
    }
    return state;
}

CorrelationLearning learn_correlation_matrix(const Matrix& labels, const AdmmSettings& settings,
                                             std::optional<double> lambda_override, int jobs) {
    const std::size_t n = labels.rows();
    const std::size_t q = labels.cols();
    if (q < 2) throw InputError("learn_correlation_matrix: need at least two labels");

    CorrelationLearning result;
    result.s = Matrix(q, q);
    result.columns.resize(q);

    parallel_for(q, jobs, [&](std::size_t j) {
        LassoProblem problem;
        problem.design = Matrix(n, q - 1);
        problem.target.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            problem.target[i] = labels(i, j);
            std::size_t c = 0;
            for (std::size_t l = 0; l < q; ++l) {
                if (l == j) continue;
                problem.design(i, c++) = labels(i, l);
            }
        }
        problem.lambda = lambda_override ? *lambda_override
                                         : lambda_heuristic(problem.target, problem.design);

        const AdmmState state = admm_lasso(problem, settings);

        ColumnSolveInfo& info = result.columns[j];
        info.lambda = problem.lambda;
        info.iterations = state.iterations;
        info.converged = state.converged;
        info.constant_label = true;
        for (std::size_t i = 1; i < n && info.constant_label; ++i)
            if (problem.target[i] != problem.target[0]) info.constant_label = false;

        std::size_t c = 0;
        for (std::size_t l = 0; l < q; ++l) {
            if (l == j) continue;
            result.s(l, j) = state.z[c++];
        }
    });

    result.all_converged = true;
    for (const auto& info : result.columns)
        if (!info.converged) result.all_converged = false;
    return result;
}

CorrelationModel build_collaboration_matrix(const Matrix& s, double alpha) {
    if (s.rows() != s.cols()) throw InputError("build_collaboration_matrix: S must be square");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InputError("build_collaboration_matrix: alpha must be in [0,1]");
    for (std::size_t i = 0; i < s.rows(); ++i)
        if (s(i, i) != 0.0)
            throw InputError("build_collaboration_matrix: S must have a zero diagonal");

    CorrelationModel model;
    model.s = s;
    model.alpha = alpha;
    model.g = Matrix(s.rows(), s.cols());
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j)
            model.g(i, j) = alpha * s(i, j) + (i == j ? 1.0 - alpha : 0.0);
    }
    return model;
}

}  // namespace camel
