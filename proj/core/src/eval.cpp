#include "vlcloc/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace vlcloc {

double ped(std::pair<double, double> predicted,
           std::pair<double, double> truth) {
    if (!std::isfinite(predicted.first) || !std::isfinite(predicted.second) ||
        !std::isfinite(truth.first) || !std::isfinite(truth.second)) {
        throw std::invalid_argument("non-finite position");
    }
    return std::hypot(predicted.first - truth.first,
                      predicted.second - truth.second);
}

double accuracy_rate(const std::vector<double>& errors, double threshold) {
    if (errors.empty()) throw std::invalid_argument("empty error list");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be > 0");
    std::size_t hits = 0;
    for (double e : errors) {
        if (e < threshold) ++hits;
    }
    return static_cast<double>(hits) / errors.size();
}

std::vector<double> accuracy_curve(const std::vector<double>& errors,
                                   const std::vector<double>& thresholds) {
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (!(thresholds[i] > thresholds[i - 1])) {
            throw std::invalid_argument("thresholds must be strictly increasing");
        }
    }
    std::vector<double> acc;
    acc.reserve(thresholds.size());
    for (double t : thresholds) acc.push_back(accuracy_rate(errors, t));
    return acc;
}

void EvalReport::add_row(const std::string& method,
                         std::vector<double> accuracies) {
    if (accuracies.size() != thresholds.size()) {
        throw std::invalid_argument("row arity does not match thresholds");
    }
    for (double a : accuracies) {
        if (a < 0.0 || a > 1.0) throw std::invalid_argument("accuracy out of [0,1]");
    }
    rows.emplace_back(method, std::move(accuracies));
}

const std::vector<double>* EvalReport::find_row(const std::string& method) const {
    for (const auto& [name, acc] : rows) {
        if (name == method) return &acc;
    }
    return nullptr;
}

const std::vector<std::string>& canonical_method_order() {
    static const std::vector<std::string> order = {
        "VLC-81 with SVM", "VLC-4 with SVM", "WiFi with SVM",
        "VLC-81 with NN",  "VLC-4 with NN",  "WiFi with NN",
        "VLC-81 with KNN", "VLC-4 with KNN", "WiFi with KNN",
        "Classic VLC",     "Classic WiFi",
    };
    return order;
}

namespace {

std::string fmt_threshold(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

std::string fmt_acc(double a) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.3f", a);
    return buf;
}

std::vector<const std::pair<std::string, std::vector<double>>*> ordered_rows(
    const EvalReport& report) {
    std::vector<const std::pair<std::string, std::vector<double>>*> out;
    const auto& canon = canonical_method_order();
    bool all_present = report.rows.size() == canon.size();
    if (all_present) {
        for (const std::string& m : canon) {
            if (!report.find_row(m)) {
                all_present = false;
                break;
            }
        }
    }
    if (all_present) {
        for (const std::string& m : canon) {
            for (const auto& row : report.rows) {
                if (row.first == m) out.push_back(&row);
            }
        }
    } else {
        for (const auto& row : report.rows) out.push_back(&row);
    }
    return out;
}

}  // namespace

std::string render_report(const EvalReport& report, ReportFormat format) {
    auto rows = ordered_rows(report);
    std::string out;
    if (format == ReportFormat::Csv) {
        out += "method";
        for (double t : report.thresholds) out += ",ped_" + fmt_threshold(t);
        out += ",n_samples\n";
        for (const auto* row : rows) {
            out += row->first;
            for (double a : row->second) out += "," + fmt_acc(a);
            out += "," + std::to_string(report.n_samples) + "\n";
        }
        return out;
    }
    out += "| Methods |";
    for (double t : report.thresholds) out += " " + fmt_threshold(t) + " m |";
    out += "\n|---|";
    for (std::size_t i = 0; i < report.thresholds.size(); ++i) out += "---|";
    out += "\n";
    for (const auto* row : rows) {
        out += "| " + row->first + " |";
        for (double a : row->second) out += " " + fmt_acc(a) + " |";
        out += "\n";
    }
    return out;
}

std::vector<double> prediction_errors(const EstimatorModel& model,
                                      const FingerprintDataset& test,
                                      double snap_spacing) {
    if (test.n_features() != model.n_features()) {
        throw std::invalid_argument("feature arity mismatch");
    }
    std::vector<double> errors;
    errors.reserve(test.rows());
    for (std::size_t r = 0; r < test.rows(); ++r) {
        std::pair<double, double> pred;
        try {
            pred = model.predict(std::span<const double>(test.features.row(r),
                                                         test.n_features()));
        } catch (const std::runtime_error&) {
            // Classic rows with too few usable anchors count as misses.
            errors.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        auto [px, py] = pred;
        if (snap_spacing > 0.0) {
            px = std::round(px / snap_spacing) * snap_spacing;
            py = std::round(py / snap_spacing) * snap_spacing;
        }
        errors.push_back(ped({px, py}, {test.targets(r, 0), test.targets(r, 1)}));
    }
    return errors;
}

}  // namespace vlcloc
