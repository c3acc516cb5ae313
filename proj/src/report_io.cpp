#include "camel/report_io.hpp"

#include <json.hpp>

#include "camel/text_io.hpp"

namespace camel {

namespace {

using nlohmann::json;

void append_metric_lines(std::string& out, const MetricReport& r, const std::string& indent) {
    out += indent + "one_error " + format_double(r.one_error) + '\n';
    out += indent + "hamming_loss " + format_double(r.hamming_loss) + '\n';
    out += indent + "coverage " + format_double(r.coverage) + '\n';
    out += indent + "ranking_loss " + format_double(r.ranking_loss) + '\n';
    out += indent + "average_precision " + format_double(r.average_precision) + '\n';
    out += indent + "macro_f1 " + format_double(r.macro_f1) + '\n';
    out += indent + "micro_f1 " + format_double(r.micro_f1) + '\n';
}

json metric_values_json(const MetricReport& r) {
    return json{{"one_error", r.one_error},
                {"hamming_loss", r.hamming_loss},
                {"coverage", r.coverage},
                {"ranking_loss", r.ranking_loss},
                {"average_precision", r.average_precision},
                {"macro_f1", r.macro_f1},
                {"micro_f1", r.micro_f1}};
}

json skipped_json(const MetricReport& r) {
    return json{{"one_error", r.one_error_skipped},
                {"coverage", r.coverage_skipped},
                {"ranking_loss", r.ranking_loss_skipped},
                {"average_precision", r.average_precision_skipped}};
}

}  // namespace

std::string metrics_to_text(const MetricReport& r) {
    std::string out = "# camel metrics v1\n";
    append_metric_lines(out, r, "");
    out += "skipped_one_error " + std::to_string(r.one_error_skipped) + '\n';
    out += "skipped_coverage " + std::to_string(r.coverage_skipped) + '\n';
    out += "skipped_ranking_loss " + std::to_string(r.ranking_loss_skipped) + '\n';
    out += "skipped_average_precision " + std::to_string(r.average_precision_skipped) + '\n';
    return out;
}

std::string metrics_to_json(const MetricReport& r) {
    json j = metric_values_json(r);
    j["skipped"] = skipped_json(r);
    return j.dump(2) + '\n';
}

std::string cv_result_to_text(const CvResult& result) {
    std::string out = "# camel cv-result v1\n";
    if (!result.all_converged) out += "# warning: non-convergence in at least one fold\n";
    out += "seed " + std::to_string(result.seed) + '\n';
    out += "folds " + std::to_string(result.fold_count) + '\n';
    if (result.selection)
        out += "selection_metric " + std::string(selection_metric_name(*result.selection)) +
               '\n';
    for (std::size_t f = 0; f < result.folds.size(); ++f) {
        const FoldResult& fr = result.folds[f];
        out += "fold " + std::to_string(f) + '\n';
        out += "  alpha " + format_double(fr.chosen.alpha) + " lambda1 " +
               format_double(fr.chosen.lambda1) + " lambda2 " +
               format_double(fr.chosen.lambda2) + '\n';
        out += "  sigma " + format_double(fr.sigma) + '\n';
        out += "  converged " + std::to_string(fr.fit_converged && fr.correlation_converged) +
               '\n';
        append_metric_lines(out, fr.report, "  ");
    }
    out += "mean\n";
    append_metric_lines(out, result.mean, "  ");
    out += "stddev\n";
    append_metric_lines(out, result.stddev, "  ");
    return out;
}

std::string cv_result_to_json(const CvResult& result) {
    json folds = json::array();
    for (std::size_t f = 0; f < result.folds.size(); ++f) {
        const FoldResult& fr = result.folds[f];
        json jf{{"fold", f},
                {"alpha", fr.chosen.alpha},
                {"lambda1", fr.chosen.lambda1},
                {"lambda2", fr.chosen.lambda2},
                {"sigma", fr.sigma},
                {"converged", fr.fit_converged && fr.correlation_converged},
                {"metrics", metric_values_json(fr.report)},
                {"skipped", skipped_json(fr.report)}};
        folds.push_back(std::move(jf));
    }
    json j{{"seed", result.seed},
           {"folds", result.fold_count},
           {"warning_nonconvergence", !result.all_converged},
           {"per_fold", std::move(folds)},
           {"mean", metric_values_json(result.mean)},
           {"stddev", metric_values_json(result.stddev)}};
    if (result.selection) j["selection_metric"] = selection_metric_name(*result.selection);
    return j.dump(2) + '\n';
}

std::string sensitivity_to_text(const CvResult& result) {
    std::string out = "# camel sensitivity v1\n# fold alpha lambda2 score\n";
    for (const auto& e : result.sensitivity) {
        out += std::to_string(e.fold);
        out += ' ';
        out += format_double(e.alpha);
        out += ' ';
        out += format_double(e.lambda2);
        out += ' ';
        out += format_double(e.score);
        out += '\n';
    }
    return out;
}

std::string convergence_log_to_text(const FitDiagnostics& diagnostics) {
    std::string out = "# camel convergence v1\n# iteration delta_z objective\n";
    for (std::size_t i = 0; i < diagnostics.delta_z_history.size(); ++i) {
        out += std::to_string(i + 1);
        out += ' ';
        out += format_double(diagnostics.delta_z_history[i]);
        out += ' ';
        out += format_double(diagnostics.objective_history[i]);
        out += '\n';
    }
    return out;
}

}  // namespace camel
