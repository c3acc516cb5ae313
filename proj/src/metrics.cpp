#include "camel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "camel/errors.hpp"

namespace camel {

namespace {

void check_pm1(const Matrix& m, const char* what) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = m.data()[i];
        if (v != 1.0 && v != -1.0)
            throw InputError(std::string(what) + " must contain only -1/+1 entries");
    }
}

void check_shapes(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InputError("metrics: shape mismatch between arguments");
    if (a.rows() == 0 || a.cols() == 0) throw InputError("metrics: empty input");
}

void check_finite(const Matrix& scores) {
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (!std::isfinite(scores.data()[i]))
            throw InputError("metrics: scores must be finite");
}

std::size_t relevant_count(const Matrix& truth, std::size_t i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < truth.cols(); ++j)
        if (truth(i, j) == 1.0) ++c;
    return c;
}

// rank[j] with 1 = highest score, ties broken toward the lower index:
// sort label indices by (score desc, index asc).
std::vector<std::size_t> ranks_of(const double* scores, std::size_t q) {
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    std::vector<std::size_t> rank(q);
    for (std::size_t pos = 0; pos < q; ++pos) rank[order[pos]] = pos + 1;
    return rank;
}

double mean_or_throw(double total, std::size_t valid, const char* what) {
    if (valid == 0)
        throw InputError(std::string(what) + ": no instance has a usable label pattern");
    return total / static_cast<double>(valid);
}

}  // namespace

double one_error(const Matrix& truth, const Matrix& scores) {
    check_shapes(truth, scores);
    check_pm1(truth, "truth");
    check_finite(scores);
    const std::size_t q = truth.cols();
    double total = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        if (relevant_count(truth, i) == 0) continue;
        ++valid;
        std::size_t top = 0;
        for (std::size_t j = 1; j < q; ++j)
            if (scores(i, j) > scores(i, top)) top = j;
        if (truth(i, top) != 1.0) total += 1.0;
    }
    return mean_or_throw(total, valid, "one_error");
}

double hamming_loss(const Matrix& truth, const Matrix& predictions) {
    check_shapes(truth, predictions);
    check_pm1(truth, "truth");
    check_pm1(predictions, "predictions");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth.data()[i] != predictions.data()[i]) ++mismatches;
    return static_cast<double>(mismatches) / static_cast<double>(truth.size());
}

double coverage(const Matrix& truth, const Matrix& scores) {
    check_shapes(truth, scores);
    check_pm1(truth, "truth");
    check_finite(scores);
    const std::size_t q = truth.cols();
    double total = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        if (relevant_count(truth, i) == 0) continue;
        ++valid;
        const auto rank = ranks_of(scores.row(i), q);
        std::size_t deepest = 0;
        for (std::size_t j = 0; j < q; ++j)
            if (truth(i, j) == 1.0) deepest = std::max(deepest, rank[j]);
        total += static_cast<double>(deepest - 1) / static_cast<double>(q);
    }
    return mean_or_throw(total, valid, "coverage");
}

double ranking_loss(const Matrix& truth, const Matrix& scores) {
    check_shapes(truth, scores);
    check_pm1(truth, "truth");
    check_finite(scores);
    const std::size_t q = truth.cols();
    double total = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const std::size_t rel = relevant_count(truth, i);
        if (rel == 0 || rel == q) continue;
        ++valid;
        double bad = 0.0;
        for (std::size_t a = 0; a < q; ++a) {
            if (truth(i, a) != 1.0) continue;
            for (std::size_t b = 0; b < q; ++b) {
                if (truth(i, b) == 1.0) continue;
                if (scores(i, a) < scores(i, b))
                    bad += 1.0;
                else if (scores(i, a) == scores(i, b))
                    bad += 0.5;
            }
        }
        total += bad / (static_cast<double>(rel) * static_cast<double>(q - rel));
    }
    return mean_or_throw(total, valid, "ranking_loss");
}

double average_precision(const Matrix& truth, const Matrix& scores) {
    check_shapes(truth, scores);
    check_pm1(truth, "truth");
    check_finite(scores);
    const std::size_t q = truth.cols();
    double total = 0.0;
    std::size_t valid = 0;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const std::size_t rel = relevant_count(truth, i);
        if (rel == 0) continue;
        ++valid;
        const auto rank = ranks_of(scores.row(i), q);
        double inst = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            if (truth(i, j) != 1.0) continue;
            std::size_t at_or_above = 0;
            for (std::size_t l = 0; l < q; ++l)
                if (truth(i, l) == 1.0 && rank[l] <= rank[j]) ++at_or_above;
            inst += static_cast<double>(at_or_above) / static_cast<double>(rank[j]);
        }
        total += inst / static_cast<double>(rel);
    }
    return mean_or_throw(total, valid, "average_precision");
}

namespace {

struct F1Counts {
    std::size_t tp = 0, fp = 0, fn = 0;
};

F1Counts label_counts(const Matrix& truth, const Matrix& predictions, std::size_t j) {
    F1Counts c;
    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const bool t = truth(i, j) == 1.0;
        const bool p = predictions(i, j) == 1.0;
        if (t && p) ++c.tp;
        if (!t && p) ++c.fp;
        if (t && !p) ++c.fn;
    }
    return c;
}

double f1_from(const F1Counts& c) {
    const double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

}  // namespace

double macro_f1(const Matrix& truth, const Matrix& predictions) {
    check_shapes(truth, predictions);
    check_pm1(truth, "truth");
    check_pm1(predictions, "predictions");
    double total = 0.0;
    for (std::size_t j = 0; j < truth.cols(); ++j)
        total += f1_from(label_counts(truth, predictions, j));
    return total / static_cast<double>(truth.cols());
}

double micro_f1(const Matrix& truth, const Matrix& predictions) {
    check_shapes(truth, predictions);
    check_pm1(truth, "truth");
    check_pm1(predictions, "predictions");
    F1Counts pooled;
    for (std::size_t j = 0; j < truth.cols(); ++j) {
        const F1Counts c = label_counts(truth, predictions, j);
        pooled.tp += c.tp;
        pooled.fp += c.fp;
        pooled.fn += c.fn;
    }
    return f1_from(pooled);
}

MetricReport evaluate_all(const Matrix& truth, const Matrix& scores,
                          const Matrix& predictions) {
    check_shapes(truth, scores);
    check_shapes(truth, predictions);
    const std::size_t q = truth.cols();

    MetricReport r;
    r.one_error = one_error(truth, scores);
    r.hamming_loss = hamming_loss(truth, predictions);
    r.coverage = coverage(truth, scores);
    r.ranking_loss = ranking_loss(truth, scores);
    r.average_precision = average_precision(truth, scores);
    r.macro_f1 = macro_f1(truth, predictions);
    r.micro_f1 = micro_f1(truth, predictions);

    for (std::size_t i = 0; i < truth.rows(); ++i) {
        const std::size_t rel = relevant_count(truth, i);
        if (rel == 0) {
            ++r.one_error_skipped;
            ++r.coverage_skipped;
            ++r.average_precision_skipped;
        }
        if (rel == 0 || rel == q) ++r.ranking_loss_skipped;
    }
    return r;
}

}  // namespace camel
