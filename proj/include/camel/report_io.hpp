#pragma once

#include <string>

#include "camel/metrics.hpp"
#include "camel/trainer.hpp"
#include "camel/tuner.hpp"

namespace camel {

// All writers emit fully deterministic bytes for identical results; wall
// clock and other run-dependent data never enter these formats.

std::string metrics_to_text(const MetricReport& report);
std::string metrics_to_json(const MetricReport& report);

std::string cv_result_to_text(const CvResult& result);
std::string cv_result_to_json(const CvResult& result);

// fold/alpha/lambda2/score rows from the inner grid search of each fold.
std::string sensitivity_to_text(const CvResult& result);

// iteration / delta_z / objective triples.
std::string convergence_log_to_text(const FitDiagnostics& diagnostics);

}  // namespace camel
