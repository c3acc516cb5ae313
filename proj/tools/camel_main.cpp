// Command-line front end: corr / train / predict / eval / cv.
// Exit codes: 0 success, 2 input error, 3 numerical divergence,
// 4 non-convergence (soft; results are still written).

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "camel/correlation.hpp"
#include "camel/dataset.hpp"
#include "camel/errors.hpp"
#include "camel/metrics.hpp"
#include "camel/parallel.hpp"
#include "camel/report_io.hpp"
#include "camel/text_io.hpp"
#include "camel/trainer.hpp"
#include "camel/tuner.hpp"

namespace fs = std::filesystem;
using namespace camel;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitNonConverged = 4;

struct CommonOpts {
    double alpha = 0.0;
    double lambda1 = 1.0;
    double lambda2 = 0.0;
    double rho = 1.0;
    double outer_tol = 1e-6;
    int max_outer_iter = 50;
    double admm_tol_abs = 1e-6;
    double admm_tol_rel = 1e-4;
    int admm_max_iter = 1000;
    std::uint64_t seed = kDefaultSeed;
    int jobs = 0;  // 0 = all hardware threads
    std::string format = "text";
    std::string output;
};

TrainerConfig base_config(const CommonOpts& o) {
    TrainerConfig cfg;
    cfg.alpha = o.alpha;
    cfg.lambda1 = o.lambda1;
    cfg.lambda2 = o.lambda2;
    cfg.outer_tol = o.outer_tol;
    cfg.max_outer_iter = o.max_outer_iter;
    cfg.admm.rho = o.rho;
    cfg.admm.tol_abs = o.admm_tol_abs;
    cfg.admm.tol_rel = o.admm_tol_rel;
    cfg.admm.max_iter = o.admm_max_iter;
    return cfg;
}

int effective_jobs(const CommonOpts& o) { return o.jobs > 0 ? o.jobs : default_jobs(); }

fs::path ensure_output_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
    return p;
}

void add_admm_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--rho", o.rho, "ADMM penalty parameter")->capture_default_str();
    cmd->add_option("--admm-tol-abs", o.admm_tol_abs, "ADMM absolute tolerance")
        ->capture_default_str();
    cmd->add_option("--admm-tol-rel", o.admm_tol_rel, "ADMM relative tolerance")
        ->capture_default_str();
    cmd->add_option("--admm-max-iter", o.admm_max_iter, "ADMM iteration cap")
        ->capture_default_str();
}

int run_corr(const std::string& labels_path, const std::string& features_path,
             std::optional<double> lambda, const CommonOpts& o) {
    const Matrix labels = load_label_matrix(labels_path);
    if (!features_path.empty()) {
        // features are not used by correlation learning; accept them only to
        // validate that the two files describe the same instances
        const Dataset ds = load_dataset(features_path, labels_path);
        (void)ds;
    }
    const CorrelationLearning learned = learn_correlation_matrix(
        labels, base_config(o).admm, lambda, effective_jobs(o));
    const CorrelationModel model = build_collaboration_matrix(learned.s, o.alpha);

    const fs::path dir = ensure_output_dir(o.output);
    atomic_write_file(dir / "S.txt", matrix_to_text(model.s));
    atomic_write_file(dir / "G.txt", matrix_to_text(model.g));

    for (std::size_t j = 0; j < learned.columns.size(); ++j) {
        const auto& c = learned.columns[j];
        if (c.constant_label)
            std::cerr << "note: label column " << j << " is constant\n";
        if (!c.converged)
            std::cerr << "warning: ADMM did not converge for label column " << j << " ("
                      << c.iterations << " iterations)\n";
    }
    return learned.all_converged ? kExitOk : kExitNonConverged;
}

int run_train(const std::string& features_path, const std::string& labels_path,
              const CommonOpts& o) {
    const Dataset ds = load_dataset(features_path, labels_path);
    const TrainerConfig cfg = base_config(o);
    const CorrelationLearning learned =
        learn_correlation_matrix(ds.labels, cfg.admm, {}, effective_jobs(o));
    const CorrelationModel corr = build_collaboration_matrix(learned.s, o.alpha);
    const TrainedModel model = fit(ds, corr, cfg);

    const fs::path dir = ensure_output_dir(o.output);
    save_model(model, dir / "model.txt");
    atomic_write_file(dir / "convergence.txt", convergence_log_to_text(model.diagnostics));

    if (!model.diagnostics.converged)
        std::cerr << "warning: outer loop stopped at max_outer_iter without reaching "
                     "outer_tol\n";
    if (!learned.all_converged)
        std::cerr << "warning: ADMM did not converge for every label column\n";
    return model.diagnostics.converged && learned.all_converged ? kExitOk : kExitNonConverged;
}

int run_predict(const std::string& model_path, const std::string& features_path,
                const CommonOpts& o) {
    const TrainedModel model = load_model(model_path);
    const Matrix features = read_matrix_file(features_path);
    const Matrix scores = predict_scores(model, features);

    const fs::path dir = ensure_output_dir(o.output);
    atomic_write_file(dir / "scores.txt", matrix_to_text(scores));
    atomic_write_file(dir / "predictions.txt", matrix_to_text(signs_of(scores)));
    return kExitOk;
}

int run_eval(const std::string& truth_path, const std::string& scores_path,
             const std::string& predictions_path, const CommonOpts& o) {
    const Matrix truth = load_label_matrix(truth_path);
    const Matrix scores = read_matrix_file(scores_path);
    const Matrix predictions = read_matrix_file(predictions_path);
    const MetricReport report = evaluate_all(truth, scores, predictions);

    const fs::path dir = ensure_output_dir(o.output);
    if (o.format == "structured")
        atomic_write_file(dir / "metrics.json", metrics_to_json(report));
    else
        atomic_write_file(dir / "metrics.txt", metrics_to_text(report));
    return kExitOk;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    for (auto f : split_fields(csv)) out.push_back(parse_double(f));
    return out;
}

int run_cv(const std::string& features_path, const std::string& labels_path, int k,
           bool use_grid, const std::string& alphas_csv, const std::string& lambda2s_csv,
           int inner_k, const std::string& selection, bool have_alpha, bool have_lambda2,
           const CommonOpts& o) {
    const Dataset ds = load_dataset(features_path, labels_path);
    const TrainerConfig base = base_config(o);
    const fs::path dir = ensure_output_dir(o.output);

    CvResult result;
    if (use_grid) {
        Grid grid = Grid::defaults();
        grid.lambda1 = o.lambda1;
        if (!alphas_csv.empty()) grid.alphas = parse_double_list(alphas_csv);
        if (!lambda2s_csv.empty()) grid.lambda2s = parse_double_list(lambda2s_csv);
        const SelectionMetric metric = parse_selection_metric(selection);
        result = nested_cross_validate(ds, grid, k, inner_k, metric, o.seed, base,
                                       effective_jobs(o));
        atomic_write_file(dir / "sensitivity.txt", sensitivity_to_text(result));
    } else {
        if (!have_alpha || !have_lambda2)
            throw InputError("cv without --grid needs --alpha and --lambda2");
        const GridPoint point{o.alpha, o.lambda1, o.lambda2};
        result = cross_validate(ds, point, k, o.seed, base, effective_jobs(o));
    }

    if (o.format == "structured")
        atomic_write_file(dir / "cv_result.json", cv_result_to_json(result));
    else
        atomic_write_file(dir / "cv_result.txt", cv_result_to_text(result));

    double seconds = 0.0;
    for (const auto& f : result.folds) seconds += f.seconds;
    std::cerr << "cv: " << result.fold_count << " folds, " << seconds
              << " s total fold time\n";
    if (!result.all_converged) std::cerr << "warning: non-convergence in at least one fold\n";
    return result.all_converged ? kExitOk : kExitNonConverged;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collaboration-based multi-label learning toolkit"};
    app.require_subcommand(1);

    CommonOpts o;

    // corr
    auto* corr = app.add_subcommand("corr", "Learn the label correlation matrix S and G");
    std::string corr_labels, corr_features;
    double corr_lambda = -1.0;
    bool corr_have_lambda = false;
    corr->add_option("--labels", corr_labels, "Label file")->required();
    corr->add_option("--features", corr_features, "Optional feature file (row check only)");
    corr->add_option("--lambda", corr_lambda, "Sparsity weight override (default: heuristic)")
        ->each([&](const std::string&) { corr_have_lambda = true; });
    corr->add_option("--alpha", o.alpha, "Collaboration degree in [0,1]")
        ->capture_default_str();
    corr->add_option("--jobs", o.jobs, "Worker threads (0 = all)");
    corr->add_option("--output", o.output, "Output directory")->required();
    add_admm_flags(corr, o);

    // train
    auto* train = app.add_subcommand("train", "Fit a model and write it to disk");
    std::string train_features, train_labels;
    train->add_option("--features", train_features, "Feature file")->required();
    train->add_option("--labels", train_labels, "Label file")->required();
    train->add_option("--alpha", o.alpha, "Collaboration degree in [0,1]")
        ->capture_default_str();
    train->add_option("--lambda1", o.lambda1, "Embedding-fit weight")->capture_default_str();
    train->add_option("--lambda2", o.lambda2, "Model-complexity weight")->required();
    train->add_option("--outer-tol", o.outer_tol, "Stop when ||dZ||_F drops below this")
        ->capture_default_str();
    train->add_option("--max-outer-iter", o.max_outer_iter, "Outer iteration cap")
        ->capture_default_str();
    train->add_option("--jobs", o.jobs, "Worker threads (0 = all)");
    train->add_option("--output", o.output, "Output directory")->required();
    add_admm_flags(train, o);

    // predict
    auto* predict = app.add_subcommand("predict", "Score instances with a saved model");
    std::string predict_model, predict_features;
    predict->add_option("--model", predict_model, "Model file")->required();
    predict->add_option("--features", predict_features, "Feature file")->required();
    predict->add_option("--output", o.output, "Output directory")->required();

    // eval
    auto* eval = app.add_subcommand("eval", "Compute the seven evaluation metrics");
    std::string eval_truth, eval_scores, eval_predictions;
    eval->add_option("--labels", eval_truth, "Ground-truth label file")->required();
    eval->add_option("--scores", eval_scores, "Score matrix file")->required();
    eval->add_option("--predictions", eval_predictions, "Prediction matrix file")->required();
    eval->add_option("--format", o.format, "text or structured")->capture_default_str();
    eval->add_option("--output", o.output, "Output directory")->required();

    // cv
    auto* cv = app.add_subcommand("cv", "Cross-validated evaluation, optionally with tuning");
    std::string cv_features, cv_labels, cv_alphas, cv_lambda2s;
    std::string cv_selection = "average_precision";
    int cv_k = 10;
    int cv_inner_k = 5;
    bool cv_grid = false;
    bool cv_have_alpha = false, cv_have_lambda2 = false;
    cv->add_option("--features", cv_features, "Feature file")->required();
    cv->add_option("--labels", cv_labels, "Label file")->required();
    cv->add_option("--k", cv_k, "Outer fold count")->capture_default_str();
    cv->add_flag("--grid", cv_grid, "Tune (alpha, lambda2) by inner-CV grid search");
    cv->add_option("--alphas", cv_alphas, "Comma-separated alpha grid override");
    cv->add_option("--lambda2s", cv_lambda2s, "Comma-separated lambda2 grid override");
    cv->add_option("--inner-k", cv_inner_k, "Inner fold count for grid search")
        ->capture_default_str();
    cv->add_option("--selection-metric", cv_selection, "Metric optimized by the grid search")
        ->capture_default_str();
    cv->add_option("--alpha", o.alpha, "Fixed collaboration degree (no-grid mode)")
        ->each([&](const std::string&) { cv_have_alpha = true; });
    cv->add_option("--lambda1", o.lambda1, "Embedding-fit weight")->capture_default_str();
    cv->add_option("--lambda2", o.lambda2, "Fixed model-complexity weight (no-grid mode)")
        ->each([&](const std::string&) { cv_have_lambda2 = true; });
    cv->add_option("--outer-tol", o.outer_tol, "Fit stopping tolerance")->capture_default_str();
    cv->add_option("--max-outer-iter", o.max_outer_iter, "Outer iteration cap")
        ->capture_default_str();
    cv->add_option("--seed", o.seed, "Fold-split seed")->capture_default_str();
    cv->add_option("--jobs", o.jobs, "Worker threads (0 = all)");
    cv->add_option("--format", o.format, "text or structured")->capture_default_str();
    cv->add_option("--output", o.output, "Output directory")->required();
    add_admm_flags(cv, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (o.format != "text" && o.format != "structured")
            throw InputError("--format must be 'text' or 'structured'");
        if (corr->parsed())
            return run_corr(corr_labels, corr_features,
                            corr_have_lambda ? std::optional<double>(corr_lambda)
                                             : std::nullopt,
                            o);
        if (train->parsed()) return run_train(train_features, train_labels, o);
        if (predict->parsed()) return run_predict(predict_model, predict_features, o);
        if (eval->parsed()) return run_eval(eval_truth, eval_scores, eval_predictions, o);
        if (cv->parsed())
            return run_cv(cv_features, cv_labels, cv_k, cv_grid, cv_alphas, cv_lambda2s,
                          cv_inner_k, cv_selection, cv_have_alpha, cv_have_lambda2, o);
        return kExitInput;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
}
