#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "camel/dataset.hpp"
#include "camel/metrics.hpp"
#include "camel/trainer.hpp"

namespace camel {

struct GridPoint {
    double alpha = 0.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
};

struct Grid {
    std::vector<double> alphas;
    std::vector<double> lambda2s;
    double lambda1 = 1.0;

    // alpha in {0, 0.1, ..., 1}; lambda2 on the 1-and-2 mantissa ladder
    // {1e-3, 2e-3, 1e-2, 2e-2, 1e-1, 2e-1, 1}; lambda1 fixed at 1.
    static Grid defaults();

    std::vector<GridPoint> points() const;  // alpha-major order
};

enum class SelectionMetric {
    one_error,
    hamming_loss,
    coverage,
    ranking_loss,
    average_precision,
    macro_f1,
    micro_f1,
};

bool higher_is_better(SelectionMetric metric);
double metric_value(const MetricReport& report, SelectionMetric metric);
SelectionMetric parse_selection_metric(std::string_view name);  // throws InputError
std::string_view selection_metric_name(SelectionMetric metric);

struct FoldFit {
    TrainedModel model;
    bool correlation_converged = false;
};

// Learns the correlation matrix, bandwidth, and model from the selected
// training rows only; nothing outside `train_rows` influences the fit.
FoldFit fit_fold(const Dataset& ds, std::span<const int> train_rows, const GridPoint& point,
                 const TrainerConfig& base);

struct FoldResult {
    MetricReport report;
    GridPoint chosen;
    double sigma = 0.0;
    double seconds = 0.0;  // wall clock; kept out of serialized results
    bool fit_converged = false;
    bool correlation_converged = false;
};

struct SensitivityEntry {
    int fold = 0;
    double alpha = 0.0;
    double lambda2 = 0.0;
    double score = 0.0;
};

struct CvResult {
    int fold_count = 0;
    std::uint64_t seed = 0;
    std::vector<FoldResult> folds;
    MetricReport mean;
    MetricReport stddev;  // population deviation (divide by k)
    bool all_converged = false;
    std::optional<SelectionMetric> selection;          // set by the nested protocol
    std::vector<SensitivityEntry> sensitivity;         // per-fold grid score table
};

// k-fold evaluation of one fixed hyperparameter point.
CvResult cross_validate(const Dataset& ds, const GridPoint& point, int k, std::uint64_t seed,
                        const TrainerConfig& base, int jobs = 1);

struct GridSearchOutcome {
    GridPoint best;
    double best_score = 0.0;
    std::vector<std::pair<GridPoint, double>> table;  // mean inner-CV score per point
    long total_fits = 0;
};

// Inner-CV evaluation of every grid point; ties resolve toward smaller
// alpha, then smaller lambda2.
GridSearchOutcome grid_search(const Dataset& ds, const Grid& grid, int inner_k,
                              SelectionMetric metric, std::uint64_t seed,
                              const TrainerConfig& base, int jobs = 1);

// Outer k-fold CV with per-fold inner grid search, the full experimental
// protocol. The inner split seed is derived deterministically from
// (seed, outer fold).
CvResult nested_cross_validate(const Dataset& ds, const Grid& grid, int outer_k, int inner_k,
                               SelectionMetric metric, std::uint64_t seed,
                               const TrainerConfig& base, int jobs = 1);

}  // namespace camel
