#include "camel/trainer.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "camel/errors.hpp"
#include "camel/simd.hpp"
#include "camel/text_io.hpp"

namespace camel {

namespace {

void check_config(const TrainerConfig& cfg) {
    if (cfg.lambda1 <= 0.0) throw InputError("trainer: lambda1 must be positive");
    if (cfg.lambda2 <= 0.0) throw InputError("trainer: lambda2 must be positive");
    if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
        throw InputError("trainer: alpha must be in [0,1]");
    if (cfg.outer_tol <= 0.0) throw InputError("trainer: outer_tol must be positive");
    if (cfg.max_outer_iter < 1) throw InputError("trainer: max_outer_iter must be at least 1");
}

}  // namespace

double gaussian_bandwidth(const Matrix& features) {
    const std::size_t n = features.rows();
    if (n < 2) throw InputError("gaussian_bandwidth: need at least two instances");
    const auto& k = simd::active_kernels();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            total += std::sqrt(k.squared_distance(features.row(i), features.row(j),
                                                  features.cols()));
    const double sigma = total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
    if (sigma <= 0.0)
        throw InputError("gaussian_bandwidth: all instances coincide, bandwidth is zero");
    return sigma;
}

Matrix kernel_matrix(const Matrix& features, const KernelSpec& spec) {
    if (spec.bandwidth <= 0.0) throw InputError("kernel_matrix: bandwidth must be positive");
    const auto& k = simd::active_kernels();
    const std::size_t n = features.rows();
    const double scale = 1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = std::exp(
                -scale * k.squared_distance(features.row(i), features.row(j), features.cols()));
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

Matrix cross_kernel(const Matrix& train, const Matrix& test, const KernelSpec& spec) {
    if (spec.bandwidth <= 0.0) throw InputError("cross_kernel: bandwidth must be positive");
    if (train.cols() != test.cols())
        throw InputError("cross_kernel: feature dimensions disagree");
    const auto& k = simd::active_kernels();
    const double scale = 1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
    Matrix out(test.rows(), train.rows());
    for (std::size_t i = 0; i < test.rows(); ++i)
        for (std::size_t j = 0; j < train.rows(); ++j)
            out(i, j) = std::exp(
                -scale * k.squared_distance(test.row(i), train.row(j), test.cols()));
    return out;
}

std::shared_ptr<const KernelContext> make_kernel_context(const Matrix& features) {
    auto ctx = std::make_shared<KernelContext>();
    ctx->spec.bandwidth = gaussian_bandwidth(features);
    ctx->kernel = kernel_matrix(features, ctx->spec);
    return ctx;
}

std::shared_ptr<const RidgeContext> make_ridge_context(const Matrix& kernel, double lambda2) {
    if (lambda2 <= 0.0) throw InputError("make_ridge_context: lambda2 must be positive");
    const std::size_t n = kernel.rows();
    Matrix h(n, n);
    const double inv_l2 = 1.0 / lambda2;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h(i, j) = inv_l2 * kernel(i, j) + (i == j ? 1.0 : 0.0);

    auto ctx = std::make_shared<RidgeContext>();
    ctx->lambda2 = lambda2;
    ctx->h_factor = Cholesky(h);
    ctx->h_inv_ones = ctx->h_factor.solve(std::vector<double>(n, 1.0));
    ctx->h_inv_ones_sum =
        simd::active_kernels().sum(ctx->h_inv_ones.data(), ctx->h_inv_ones.size());
    return ctx;
}

void update_model_params(TrainerState& state, const TrainerConfig& config) {
    (void)config;  // lambda2 is baked into the cached factorization
    const auto& ridge = *state.ridge_ctx;
    const auto& kern = simd::active_kernels();
    const Matrix& z = state.embedding;
    const std::size_t n = z.rows();
    const std::size_t q = z.cols();

    // bᵀ = (1ᵀH⁻¹Z)/(1ᵀH⁻¹1) with u = H⁻¹1 cached; H symmetric makes
    // 1ᵀH⁻¹Z = uᵀZ.
    std::vector<double> acc(q, 0.0);
    for (std::size_t i = 0; i < n; ++i) kern.axpy(ridge.h_inv_ones[i], z.row(i), acc.data(), q);
    state.bias.resize(q);
    for (std::size_t j = 0; j < q; ++j) state.bias[j] = acc[j] / ridge.h_inv_ones_sum;

    Matrix rhs = z;
    for (std::size_t i = 0; i < n; ++i) {
        double* r = rhs.row(i);
        for (std::size_t j = 0; j < q; ++j) r[j] -= state.bias[j];
    }
    state.dual_coeffs = ridge.h_factor.solve(rhs);
}

void compute_outputs(TrainerState& state, const TrainerConfig& config) {
    const Matrix& kernel = state.kernel_ctx->kernel;
    const Matrix& a = state.dual_coeffs;
    const auto& kern = simd::active_kernels();
    const std::size_t n = kernel.rows();
    const std::size_t q = a.cols();
    const double inv_l2 = 1.0 / config.lambda2;

    const Matrix at = transpose(a);
    state.outputs = Matrix(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        double* out = state.outputs.row(i);
        for (std::size_t j = 0; j < q; ++j)
            out[j] = inv_l2 * kern.dot(kernel.row(i), at.row(j), n) + state.bias[j];
    }
    state.residual = Matrix(n, q);
    for (std::size_t i = 0; i < state.residual.size(); ++i)
        state.residual.data()[i] = state.embedding.data()[i] - state.outputs.data()[i];
}

Matrix update_embedding(const Matrix& outputs, const Matrix& labels, const Matrix& g,
                        double lambda1) {
    if (lambda1 <= 0.0) throw InputError("update_embedding: lambda1 must be positive");
    const std::size_t q = g.rows();
    Matrix c = matmul_nt(g, g);  // G·Gᵀ
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) c(i, j) = lambda1 * c(i, j) + (i == j ? 1.0 : 0.0);
    const Cholesky factor(c);

    Matrix rhs = matmul_nt(labels, g);  // Y·Gᵀ
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs.data()[i] = outputs.data()[i] + lambda1 * rhs.data()[i];

    // Z·C = rhs with C symmetric, so solve C·Zᵀ = rhsᵀ.
    return transpose(factor.solve(transpose(rhs)));
}

double objective_value(const TrainerState& state, const TrainerConfig& config,
                       const Matrix& labels, const Matrix& g) {
    const auto& kern = simd::active_kernels();
    const double fit_term =
        0.5 * kern.dot(state.residual.data(), state.residual.data(), state.residual.size());

    Matrix zg = matmul(state.embedding, g);
    const double embed_term =
        0.5 * config.lambda1 *
        kern.squared_distance(zg.data(), labels.data(), labels.size());

    const Matrix ka = matmul(state.kernel_ctx->kernel, state.dual_coeffs);
    const double complexity_term =
        0.5 / config.lambda2 *
        kern.dot(state.dual_coeffs.data(), ka.data(), ka.size());

    const double value = fit_term + embed_term + complexity_term;
    if (!std::isfinite(value))
        throw DivergenceError("objective_value: objective is not finite");
    return value;
}

TrainedModel fit(const Dataset& ds, const CorrelationModel& correlation,
                 const TrainerConfig& config) {
    validate_dataset(ds);
    if (correlation.g.rows() != ds.labels.cols())
        throw InputError("fit: collaboration matrix size does not match label count");
    auto kernel_ctx = make_kernel_context(ds.features);
    auto ridge_ctx = make_ridge_context(kernel_ctx->kernel, config.lambda2);
    return fit_with_context(ds.features, ds.labels, correlation.g, correlation.alpha, config,
                            std::move(kernel_ctx), std::move(ridge_ctx));
}

TrainedModel fit_with_context(const Matrix& features, const Matrix& labels, const Matrix& g,
                              double alpha, const TrainerConfig& config,
                              std::shared_ptr<const KernelContext> kernel_ctx,
                              std::shared_ptr<const RidgeContext> ridge_ctx) {
    check_config(config);
    if (features.rows() < 2) throw InputError("fit: need at least two training instances");
    if (features.rows() != labels.rows()) throw InputError("fit: feature/label row mismatch");

    TrainerState state;
    state.kernel_ctx = std::move(kernel_ctx);
    state.ridge_ctx = std::move(ridge_ctx);
    state.embedding = labels;  // Z starts at Y

    const std::size_t n = labels.rows();
    const std::size_t q = labels.cols();
    bool converged = false;
    int iterations = 0;

    for (int iter = 1; iter <= config.max_outer_iter; ++iter) {
        update_model_params(state, config);
        compute_outputs(state, config);
        Matrix z_new = update_embedding(state.outputs, labels, g, config.lambda1);

        const double delta_z = frobenius_distance(z_new, state.embedding);
        state.embedding = std::move(z_new);
        for (std::size_t i = 0; i < state.residual.size(); ++i)
            state.residual.data()[i] = state.embedding.data()[i] - state.outputs.data()[i];

        // The complexity term reuses T: K·A = lambda2·(T - 1bᵀ) exactly by
        // construction, so no extra n²q product is needed here.
        const auto& kern = simd::active_kernels();
        double w_term = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* arow = state.dual_coeffs.row(i);
            const double* trow = state.outputs.row(i);
            for (std::size_t j = 0; j < q; ++j) w_term += arow[j] * (trow[j] - state.bias[j]);
        }
        Matrix zg = matmul(state.embedding, g);
        const double objective =
            0.5 * kern.dot(state.residual.data(), state.residual.data(), state.residual.size()) +
            0.5 * config.lambda1 *
                kern.squared_distance(zg.data(), labels.data(), labels.size()) +
            0.5 * w_term;

        if (!std::isfinite(delta_z) || !std::isfinite(objective))
            throw DivergenceError("fit: diverged at outer iteration " + std::to_string(iter));

        state.delta_z_history.push_back(delta_z);
        state.objective_history.push_back(objective);
        iterations = iter;
        if (delta_z < config.outer_tol) {
            converged = true;
            break;
        }
    }

    TrainedModel model;
    model.dual_coeffs = std::move(state.dual_coeffs);
    model.bias = std::move(state.bias);
    model.kernel = state.kernel_ctx->spec;
    model.train_features = features;
    model.g = g;
    model.alpha = alpha;
    model.config = config;
    model.diagnostics.delta_z_history = std::move(state.delta_z_history);
    model.diagnostics.objective_history = std::move(state.objective_history);
    model.diagnostics.iterations = iterations;
    model.diagnostics.converged = converged;
    return model;
}

Matrix predict_scores_prepared(const Matrix& cross, const Matrix& dual_coeffs,
                               std::span<const double> bias, double lambda2, const Matrix& g) {
    const auto& kern = simd::active_kernels();
    const std::size_t m = cross.rows();
    const std::size_t n = cross.cols();
    const std::size_t q = dual_coeffs.cols();
    const double inv_l2 = 1.0 / lambda2;

    const Matrix at = transpose(dual_coeffs);
    Matrix raw(m, q);
    for (std::size_t i = 0; i < m; ++i) {
        double* out = raw.row(i);
        for (std::size_t j = 0; j < q; ++j)
            out[j] = inv_l2 * kern.dot(cross.row(i), at.row(j), n) + bias[j];
    }
    return matmul(raw, g);
}

Matrix predict_scores(const TrainedModel& model, const Matrix& test) {
    if (test.cols() != model.train_features.cols())
        throw InputError("predict: test feature dimension " + std::to_string(test.cols()) +
                         " does not match training dimension " +
                         std::to_string(model.train_features.cols()));
    if (test.rows() == 0) return Matrix(0, model.g.cols());
    const Matrix cross = cross_kernel(model.train_features, test, model.kernel);
    return predict_scores_prepared(cross, model.dual_coeffs, model.bias, model.config.lambda2,
                                   model.g);
}

Matrix signs_of(const Matrix& scores) {
    Matrix out(scores.rows(), scores.cols());
    for (std::size_t i = 0; i < scores.size(); ++i)
        out.data()[i] = scores.data()[i] > 0.0 ? 1.0 : -1.0;
    return out;
}

Matrix predict_labels(const TrainedModel& model, const Matrix& test) {
    return signs_of(predict_scores(model, test));
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
    std::string out = "camel-model 1\n";
    out += "converged ";
    out += model.diagnostics.converged ? "1" : "0";
    out += '\n';
    out += "n " + std::to_string(model.train_features.rows()) + '\n';
    out += "d " + std::to_string(model.train_features.cols()) + '\n';
    out += "q " + std::to_string(model.g.rows()) + '\n';
    out += "sigma " + format_double(model.kernel.bandwidth) + '\n';
    out += "alpha " + format_double(model.alpha) + '\n';
    out += "lambda1 " + format_double(model.config.lambda1) + '\n';
    out += "lambda2 " + format_double(model.config.lambda2) + '\n';
    out += "A\n" + matrix_to_text(model.dual_coeffs);
    out += "b\n";
    for (std::size_t j = 0; j < model.bias.size(); ++j) {
        if (j > 0) out += ' ';
        out += format_double(model.bias[j]);
    }
    out += '\n';
    out += "G\n" + matrix_to_text(model.g);
    out += "X\n" + matrix_to_text(model.train_features);
    atomic_write_file(path, out);
}

namespace {

class LineCursor {
  public:
    LineCursor(const std::string& content, std::string file)
        : in_(content), file_(std::move(file)) {}

    std::string next() {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        throw InputError(file_ + ": unexpected end of file");
    }

    std::string expect_value(const std::string& key) {
        const std::string line = next();
        if (line.rfind(key + " ", 0) != 0)
            throw InputError(file_ + ":" + std::to_string(lineno_) + ": expected '" + key + "'");
        return line.substr(key.size() + 1);
    }

    void expect_literal(const std::string& token) {
        const std::string line = next();
        if (line != token)
            throw InputError(file_ + ":" + std::to_string(lineno_) + ": expected '" + token +
                             "'");
    }

    Matrix read_matrix(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const std::string line = next();
            auto fields = split_fields(line);
            if (fields.size() != cols)
                throw InputError(file_ + ":" + std::to_string(lineno_) + ": expected " +
                                 std::to_string(cols) + " fields");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_double(fields[j]);
        }
        return m;
    }

  private:
    std::istringstream in_;
    std::string file_;
    std::size_t lineno_ = 0;
};

}  // namespace

TrainedModel load_model(const std::filesystem::path& path) {
    const std::string content = read_file(path);
    LineCursor cur(content, path.string());
    cur.expect_literal("camel-model 1");

    TrainedModel model;
    model.diagnostics.converged = parse_double(cur.expect_value("converged")) != 0.0;
    const auto n = static_cast<std::size_t>(parse_double(cur.expect_value("n")));
    const auto d = static_cast<std::size_t>(parse_double(cur.expect_value("d")));
    const auto q = static_cast<std::size_t>(parse_double(cur.expect_value("q")));
    model.kernel.bandwidth = parse_double(cur.expect_value("sigma"));
    model.alpha = parse_double(cur.expect_value("alpha"));
    model.config.lambda1 = parse_double(cur.expect_value("lambda1"));
    model.config.lambda2 = parse_double(cur.expect_value("lambda2"));
    model.config.alpha = model.alpha;

    cur.expect_literal("A");
    model.dual_coeffs = cur.read_matrix(n, q);
    cur.expect_literal("b");
    {
        const Matrix bias_row = cur.read_matrix(1, q);
        model.bias.assign(bias_row.data(), bias_row.data() + q);
    }
    cur.expect_literal("G");
    model.g = cur.read_matrix(q, q);
    cur.expect_literal("X");
    model.train_features = cur.read_matrix(n, d);
    return model;
}

}  // namespace camel
