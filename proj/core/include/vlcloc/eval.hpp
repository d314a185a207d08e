#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vlcloc/dataset.hpp"
#include "vlcloc/estimator.hpp"

namespace vlcloc {

/// Prediction error distance: planar Euclidean distance.
double ped(std::pair<double, double> predicted, std::pair<double, double> truth);

/// Fraction of errors strictly below the threshold.
double accuracy_rate(const std::vector<double>& errors, double threshold);

/// Accuracy at each threshold; thresholds must be strictly increasing.
std::vector<double> accuracy_curve(const std::vector<double>& errors,
                                   const std::vector<double>& thresholds);

struct EvalReport {
    std::vector<double> thresholds;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::size_t n_samples = 0;
    std::string scenario_hash;

    void add_row(const std::string& method, std::vector<double> accuracies);
    const std::vector<double>* find_row(const std::string& method) const;
};

enum class ReportFormat { Csv, Markdown };

/// Accuracy table, three-decimal entries. When all eleven canonical method
/// rows are present they are emitted in the canonical order; otherwise
/// rows keep insertion order.
std::string render_report(const EvalReport& report, ReportFormat format);

const std::vector<std::string>& canonical_method_order();

/// Per-row PED of a model over a test set. When snap_spacing > 0 the
/// prediction is snapped to the nearest grid multiple first.
std::vector<double> prediction_errors(const EstimatorModel& model,
                                      const FingerprintDataset& test,
                                      double snap_spacing = 0.0);

}  // namespace vlcloc
