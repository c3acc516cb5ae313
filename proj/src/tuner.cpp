#include "camel/tuner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <string>

#include "camel/errors.hpp"
#include "camel/parallel.hpp"

namespace camel {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// splitmix64 step; decorrelates inner-CV seeds from the outer seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

TrainerConfig with_point(const TrainerConfig& base, const GridPoint& point) {
    TrainerConfig cfg = base;
    cfg.alpha = point.alpha;
    cfg.lambda1 = point.lambda1;
    cfg.lambda2 = point.lambda2;
    return cfg;
}

void accumulate_stats(CvResult& result) {
    const auto k = static_cast<double>(result.folds.size());
    auto fill = [&](auto member) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& f : result.folds) {
            const double v = f.report.*member;
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / k;
        result.mean.*member = mean;
        result.stddev.*member = std::sqrt(std::max(0.0, sum_sq / k - mean * mean));
    };
    fill(&MetricReport::one_error);
    fill(&MetricReport::hamming_loss);
    fill(&MetricReport::coverage);
    fill(&MetricReport::ranking_loss);
    fill(&MetricReport::average_precision);
    fill(&MetricReport::macro_f1);
    fill(&MetricReport::micro_f1);
    result.all_converged = true;
    for (const auto& f : result.folds)
        if (!f.fit_converged || !f.correlation_converged) result.all_converged = false;
}

void check_grid(const Grid& grid) {
    if (grid.alphas.empty() || grid.lambda2s.empty()) throw InputError("grid is empty");
    for (double a : grid.alphas)
        if (!(a >= 0.0 && a <= 1.0)) throw InputError("grid: alpha values must be in [0,1]");
    for (double l : grid.lambda2s)
        if (l <= 0.0) throw InputError("grid: lambda2 values must be positive");
    if (grid.lambda1 <= 0.0) throw InputError("grid: lambda1 must be positive");
}

}  // namespace

Grid Grid::defaults() {
    Grid g;
    for (int i = 0; i <= 10; ++i) g.alphas.push_back(static_cast<double>(i) / 10.0);
    g.lambda2s = {1e-3, 2e-3, 1e-2, 2e-2, 1e-1, 2e-1, 1.0};
    g.lambda1 = 1.0;
    return g;
}

std::vector<GridPoint> Grid::points() const {
    std::vector<GridPoint> out;
    out.reserve(alphas.size() * lambda2s.size());
    for (double a : alphas)
        for (double l2 : lambda2s) out.push_back({a, lambda1, l2});
    return out;
}

bool higher_is_better(SelectionMetric metric) {
    switch (metric) {
        case SelectionMetric::average_precision:
        case SelectionMetric::macro_f1:
        case SelectionMetric::micro_f1:
            return true;
        default:
            return false;
    }
}

double metric_value(const MetricReport& report, SelectionMetric metric) {
    switch (metric) {
        case SelectionMetric::one_error: return report.one_error;
        case SelectionMetric::hamming_loss: return report.hamming_loss;
        case SelectionMetric::coverage: return report.coverage;
        case SelectionMetric::ranking_loss: return report.ranking_loss;
        case SelectionMetric::average_precision: return report.average_precision;
        case SelectionMetric::macro_f1: return report.macro_f1;
        case SelectionMetric::micro_f1: return report.micro_f1;
    }
    throw InputError("unknown selection metric");
}

SelectionMetric parse_selection_metric(std::string_view name) {
    if (name == "one_error") return SelectionMetric::one_error;
    if (name == "hamming_loss") return SelectionMetric::hamming_loss;
    if (name == "coverage") return SelectionMetric::coverage;
    if (name == "ranking_loss") return SelectionMetric::ranking_loss;
    if (name == "average_precision") return SelectionMetric::average_precision;
    if (name == "macro_f1") return SelectionMetric::macro_f1;
    if (name == "micro_f1") return SelectionMetric::micro_f1;
    throw InputError("unknown selection metric '" + std::string(name) + "'");
}

std::string_view selection_metric_name(SelectionMetric metric) {
    switch (metric) {
        case SelectionMetric::one_error: return "one_error";
        case SelectionMetric::hamming_loss: return "hamming_loss";
        case SelectionMetric::coverage: return "coverage";
        case SelectionMetric::ranking_loss: return "ranking_loss";
        case SelectionMetric::average_precision: return "average_precision";
        case SelectionMetric::macro_f1: return "macro_f1";
        case SelectionMetric::micro_f1: return "micro_f1";
    }
    return "unknown";
}

FoldFit fit_fold(const Dataset& ds, std::span<const int> train_rows, const GridPoint& point,
                 const TrainerConfig& base) {
    if (train_rows.size() < 2) throw InputError("fold too small to train (need n >= 2)");
    const Matrix features = take_rows(ds.features, train_rows);
    const Matrix labels = take_rows(ds.labels, train_rows);

    const CorrelationLearning learned = learn_correlation_matrix(labels, base.admm);
    const CorrelationModel corr = build_collaboration_matrix(learned.s, point.alpha);

    const TrainerConfig cfg = with_point(base, point);
    auto kernel_ctx = make_kernel_context(features);
    auto ridge_ctx = make_ridge_context(kernel_ctx->kernel, cfg.lambda2);

    FoldFit out{fit_with_context(features, labels, corr.g, corr.alpha, cfg,
                                 std::move(kernel_ctx), std::move(ridge_ctx)),
                learned.all_converged};
    return out;
}

CvResult cross_validate(const Dataset& ds, const GridPoint& point, int k, std::uint64_t seed,
                        const TrainerConfig& base, int jobs) {
    validate_dataset(ds);
    if (k < 2) throw InputError("cross_validate: need k >= 2");
    const FoldSplit split = kfold_split(ds.features.rows(), k, seed);

    CvResult result;
    result.fold_count = k;
    result.seed = seed;
    result.folds.resize(k);

    parallel_for(static_cast<std::size_t>(k), jobs, [&](std::size_t f) {
        const double start = now_seconds();
        const auto fold = static_cast<int>(f);
        const std::vector<int> train_rows = fold_train_rows(split, fold);
        const std::vector<int> test_rows = fold_test_rows(split, fold);

        const FoldFit fitted = fit_fold(ds, train_rows, point, base);
        const Matrix test_features = take_rows(ds.features, test_rows);
        const Matrix test_labels = take_rows(ds.labels, test_rows);
        const Matrix scores = predict_scores(fitted.model, test_features);

        FoldResult& fr = result.folds[f];
        fr.report = evaluate_all(test_labels, scores, signs_of(scores));
        fr.chosen = point;
        fr.sigma = fitted.model.kernel.bandwidth;
        fr.fit_converged = fitted.model.diagnostics.converged;
        fr.correlation_converged = fitted.correlation_converged;
        fr.seconds = now_seconds() - start;
    });

    accumulate_stats(result);
    return result;
}

GridSearchOutcome grid_search(const Dataset& ds, const Grid& grid, int inner_k,
                              SelectionMetric metric, std::uint64_t seed,
                              const TrainerConfig& base, int jobs) {
    validate_dataset(ds);
    check_grid(grid);
    if (inner_k < 2) throw InputError("grid_search: need inner_k >= 2");

    const std::vector<GridPoint> points = grid.points();
    const FoldSplit split = kfold_split(ds.features.rows(), inner_k, seed);

    // scores[point][fold]; folds run in parallel, each fold shares the
    // kernel matrix, correlation matrix, and per-lambda2 factorization
    // across every grid point.
    std::vector<std::vector<double>> scores(points.size(),
                                            std::vector<double>(inner_k, 0.0));
    std::atomic<long> fits{0};
    parallel_for(static_cast<std::size_t>(inner_k), jobs, [&](std::size_t f) {
        const auto fold = static_cast<int>(f);
        const std::vector<int> train_rows = fold_train_rows(split, fold);
        const std::vector<int> test_rows = fold_test_rows(split, fold);
        if (train_rows.size() < 2) throw InputError("fold too small to train (need n >= 2)");

        const Matrix features = take_rows(ds.features, train_rows);
        const Matrix labels = take_rows(ds.labels, train_rows);
        const Matrix test_features = take_rows(ds.features, test_rows);
        const Matrix test_labels = take_rows(ds.labels, test_rows);

        const CorrelationLearning learned = learn_correlation_matrix(labels, base.admm);
        const auto kernel_ctx = make_kernel_context(features);
        const Matrix cross = cross_kernel(features, test_features, kernel_ctx->spec);

        for (std::size_t li = 0; li < grid.lambda2s.size(); ++li) {
            const auto ridge_ctx = make_ridge_context(kernel_ctx->kernel, grid.lambda2s[li]);
            for (std::size_t ai = 0; ai < grid.alphas.size(); ++ai) {
                const GridPoint point{grid.alphas[ai], grid.lambda1, grid.lambda2s[li]};
                const CorrelationModel corr =
                    build_collaboration_matrix(learned.s, point.alpha);
                const TrainerConfig cfg = with_point(base, point);
                const TrainedModel model = fit_with_context(
                    features, labels, corr.g, corr.alpha, cfg, kernel_ctx, ridge_ctx);
                fits.fetch_add(1);
                const Matrix s = predict_scores_prepared(cross, model.dual_coeffs, model.bias,
                                                         cfg.lambda2, corr.g);
                const MetricReport report = evaluate_all(test_labels, s, signs_of(s));
                scores[ai * grid.lambda2s.size() + li][f] = metric_value(report, metric);
            }
        }
    });

    GridSearchOutcome outcome;
    outcome.total_fits = fits.load();
    outcome.table.reserve(points.size());
    const bool maximize = higher_is_better(metric);
    bool have_best = false;
    for (std::size_t p = 0; p < points.size(); ++p) {
        double mean = 0.0;
        for (int f = 0; f < inner_k; ++f) mean += scores[p][f];
        mean /= static_cast<double>(inner_k);
        outcome.table.emplace_back(points[p], mean);

        bool better = false;
        if (!have_best) {
            better = true;
        } else if (mean != outcome.best_score) {
            better = maximize ? mean > outcome.best_score : mean < outcome.best_score;
        } else {
            const GridPoint& b = outcome.best;
            better = points[p].alpha < b.alpha ||
                     (points[p].alpha == b.alpha && points[p].lambda2 < b.lambda2);
        }
        if (better) {
            outcome.best = points[p];
            outcome.best_score = mean;
            have_best = true;
        }
    }
    return outcome;
}

CvResult nested_cross_validate(const Dataset& ds, const Grid& grid, int outer_k, int inner_k,
                               SelectionMetric metric, std::uint64_t seed,
                               const TrainerConfig& base, int jobs) {
    validate_dataset(ds);
    check_grid(grid);
    if (outer_k < 2) throw InputError("nested_cross_validate: need k >= 2");
    const FoldSplit split = kfold_split(ds.features.rows(), outer_k, seed);

    CvResult result;
    result.fold_count = outer_k;
    result.seed = seed;
    result.selection = metric;
    result.folds.resize(outer_k);
    std::vector<std::vector<SensitivityEntry>> tables(outer_k);

    parallel_for(static_cast<std::size_t>(outer_k), jobs, [&](std::size_t f) {
        const double start = now_seconds();
        const auto fold = static_cast<int>(f);
        const std::vector<int> train_rows = fold_train_rows(split, fold);
        const std::vector<int> test_rows = fold_test_rows(split, fold);

        const Dataset train_ds = subset(ds, train_rows);
        const GridSearchOutcome search = grid_search(train_ds, grid, inner_k, metric,
                                                     mix_seed(seed, f), base, 1);
        for (const auto& [point, score] : search.table)
            tables[f].push_back({fold, point.alpha, point.lambda2, score});

        const FoldFit fitted = fit_fold(ds, train_rows, search.best, base);
        const Matrix test_features = take_rows(ds.features, test_rows);
        const Matrix test_labels = take_rows(ds.labels, test_rows);
        const Matrix scores = predict_scores(fitted.model, test_features);

        FoldResult& fr = result.folds[f];
        fr.report = evaluate_all(test_labels, scores, signs_of(scores));
        fr.chosen = search.best;
        fr.sigma = fitted.model.kernel.bandwidth;
        fr.fit_converged = fitted.model.diagnostics.converged;
        fr.correlation_converged = fitted.correlation_converged;
        fr.seconds = now_seconds() - start;
    });

    for (auto& t : tables)
        result.sensitivity.insert(result.sensitivity.end(), t.begin(), t.end());
    accumulate_stats(result);
    return result;
}

}  // namespace camel
