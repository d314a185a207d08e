#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlcloc/eval.hpp"
#include "vlcloc/scenario.hpp"

namespace vlcloc {

enum class Table2Scale { Full, Desk };

struct Table2Options {
    Table2Scale scale = Table2Scale::Desk;
    std::string out_dir = "table2-out";
    int threads = 1;
    double snap_spacing = 0.0;  // 0 disables grid snapping
    std::uint64_t base_seed = 0x7A5B1E2;
    bool verbose = true;
};

struct Table2Result {
    EvalReport report;
    std::string report_csv_path;
    std::string report_md_path;
    std::string annex_path;
    std::vector<std::string> failed_rows;
};

/// The three campaign configurations behind the accuracy table: a dense
/// ceiling LED grid ("vlc81"), four corner LEDs ("vlc4"), and four corner
/// WiFi APs ("wifi"). Train and test campaigns use disjoint derived seeds.
Scenario table2_scenario(const std::string& which, Table2Scale scale,
                         std::uint64_t base_seed);

std::vector<double> table2_thresholds();

/// Runs the full pipeline (generate, fit SVM/NN/KNN per scenario plus the
/// two classic baselines, evaluate) and writes report.csv, report.md and
/// annex.md under out_dir. Failed methods are recorded and skipped.
Table2Result run_table2(const Table2Options& options);

}  // namespace vlcloc
