#pragma once

#include "camel/matrix.hpp"

namespace camel {

// The seven evaluation metrics; every value lies in [0,1]. Instances where
// a metric's denominator vanishes (no relevant label, or no irrelevant one
// for ranking loss) are skipped and counted; a metric left with zero valid
// instances raises InputError.
struct MetricReport {
    double one_error = 0.0;
    double hamming_loss = 0.0;
    double coverage = 0.0;
    double ranking_loss = 0.0;
    double average_precision = 0.0;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
    int one_error_skipped = 0;
    int coverage_skipped = 0;
    int ranking_loss_skipped = 0;
    int average_precision_skipped = 0;
};

// Ranks use 1 = highest score; ties break toward the lowest label index.
double one_error(const Matrix& truth, const Matrix& scores);
double hamming_loss(const Matrix& truth, const Matrix& predictions);
double coverage(const Matrix& truth, const Matrix& scores);
// A (relevant, irrelevant) pair counts 1 when strictly misordered and 0.5
// on an exact score tie.
double ranking_loss(const Matrix& truth, const Matrix& scores);
double average_precision(const Matrix& truth, const Matrix& scores);
// Per-label F1 over the +1 class, averaged; a label with 2TP+FP+FN = 0
// contributes 0.
double macro_f1(const Matrix& truth, const Matrix& predictions);
double micro_f1(const Matrix& truth, const Matrix& predictions);

MetricReport evaluate_all(const Matrix& truth, const Matrix& scores, const Matrix& predictions);

}  // namespace camel
