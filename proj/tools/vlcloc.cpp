// Command-line front end: scenario-driven dataset generation, per-axis
// model training, accuracy evaluation and full accuracy-table reproduction.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vlcloc/dataset.hpp"
#include "vlcloc/eval.hpp"
#include "vlcloc/table2.hpp"

namespace fs = std::filesystem;
using namespace vlcloc;

namespace {

constexpr int kExitConfig = 2;

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int runs = 0;
    double grid_spacing = 0.0;
    int threads = 1;
    bool snap_grid = false;
};

void apply_env(CommonOpts& opts) {
    if (const char* v = std::getenv("VLCLOC_OUT")) opts.out_dir = v;
    if (const char* v = std::getenv("VLCLOC_THREADS")) {
        opts.threads = std::max(1, std::atoi(v));
    }
}

Scenario load_with_overrides(const CommonOpts& opts) {
    if (!fs::exists(opts.scenario_path)) {
        throw std::runtime_error("scenario file does not exist: " +
                                 opts.scenario_path);
    }
    Scenario s = load_scenario(opts.scenario_path);
    if (opts.seed_set) s.base_seed = opts.seed;
    if (opts.runs > 0) s.n_runs = opts.runs;
    if (opts.grid_spacing > 0.0) s.grid.spacing = opts.grid_spacing;
    s.validate();
    return s;
}

int cmd_generate(const CommonOpts& opts) {
    Scenario train_sc = load_with_overrides(opts);
    Scenario test_sc = train_sc;
    test_sc.base_seed = derive_seed(train_sc.base_seed, 0x7E57, 1);
    fs::create_directories(opts.out_dir);

    FingerprintDataset train = generate_campaign(train_sc, opts.threads);
    FingerprintDataset test = generate_campaign(test_sc, opts.threads);
    std::string train_path = (fs::path(opts.out_dir) / "train.csv").string();
    std::string test_path = (fs::path(opts.out_dir) / "test.csv").string();
    save_csv(train, train_path);
    save_csv(test, test_path);
    save_scenario(train_sc, (fs::path(opts.out_dir) / "scenario.json").string());

    std::printf("train: %zu rows x %zu features -> %s\n", train.rows(),
                train.n_features(), train_path.c_str());
    std::printf("test:  %zu rows x %zu features -> %s\n", test.rows(),
                test.n_features(), test_path.c_str());
    return 0;
}

int cmd_fit(const CommonOpts& opts, const std::string& train_path,
            const std::string& estimator, int knn_k, int mlp_epochs,
            std::size_t svr_max_rows) {
    if (!fs::exists(train_path)) {
        throw std::runtime_error("training CSV does not exist: " + train_path);
    }
    FingerprintDataset train = load_csv(train_path);
    EstimatorSpec spec;
    spec.kind = estimator_kind_from_name(estimator);
    if (knn_k > 0) spec.knn.k = knn_k;
    if (mlp_epochs > 0) spec.mlp.epochs = mlp_epochs;
    if (svr_max_rows > 0) spec.svr.max_rows = svr_max_rows;
    spec.validate();

    FitDiagnostics diag;
    EstimatorModel model = fit(spec, train, opts.seed_set ? opts.seed : 1, &diag);
    std::vector<std::string> paths;
    save_model(model, opts.out_dir, estimator, &paths);

    std::printf("fitted %s on %zu rows%s\n", estimator.c_str(), diag.rows_used,
                diag.subsampled ? " (subsampled)" : "");
    if (spec.kind == EstimatorKind::Mlp) {
        std::printf("  x-axis: %d epochs, mse %.5g -> %.5g\n", diag.mlp_x.epochs,
                    diag.mlp_x.first_epoch_mse, diag.mlp_x.last_epoch_mse);
        std::printf("  y-axis: %d epochs, mse %.5g -> %.5g\n", diag.mlp_y.epochs,
                    diag.mlp_y.first_epoch_mse, diag.mlp_y.last_epoch_mse);
    }
    if (spec.kind == EstimatorKind::Svr) {
        std::printf("  x-axis: %ld iterations, %zu support vectors%s\n",
                    diag.svr_x.iterations, diag.svr_x.n_support,
                    diag.svr_x.converged ? "" : " (NOT CONVERGED)");
        std::printf("  y-axis: %ld iterations, %zu support vectors%s\n",
                    diag.svr_y.iterations, diag.svr_y.n_support,
                    diag.svr_y.converged ? "" : " (NOT CONVERGED)");
    }
    for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
    return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::vector<std::string>& models,
                 const std::string& test_path, std::vector<double> thresholds,
                 const std::string& label) {
    if (!fs::exists(test_path)) {
        throw std::runtime_error("test CSV does not exist: " + test_path);
    }
    FingerprintDataset test = load_csv(test_path);
    EstimatorModel model = load_model(models);
    if (thresholds.empty()) thresholds = table2_thresholds();

    double snap = opts.snap_grid ? (opts.grid_spacing > 0.0 ? opts.grid_spacing
                                                            : 0.1)
                                 : 0.0;
    std::vector<double> errors = prediction_errors(model, test, snap);
    EvalReport report;
    report.thresholds = thresholds;
    report.n_samples = errors.size();
    report.scenario_hash = test.manifest.scenario_hash;
    report.add_row(label.empty() ? estimator_kind_name(model.spec.kind) : label,
                   accuracy_curve(errors, thresholds));

    fs::create_directories(opts.out_dir);
    std::string csv_path = (fs::path(opts.out_dir) / "report.csv").string();
    std::string md_path = (fs::path(opts.out_dir) / "report.md").string();
    std::ofstream(csv_path) << render_report(report, ReportFormat::Csv);
    std::ofstream(md_path) << render_report(report, ReportFormat::Markdown);
    std::printf("%s", render_report(report, ReportFormat::Markdown).c_str());
    std::printf("wrote %s and %s\n", csv_path.c_str(), md_path.c_str());
    return 0;
}

int cmd_reproduce(const CommonOpts& opts, const std::string& scale) {
    Table2Options t2;
    t2.scale = scale == "full" ? Table2Scale::Full : Table2Scale::Desk;
    t2.out_dir = opts.out_dir;
    t2.threads = opts.threads;
    if (opts.snap_grid) {
        t2.snap_spacing = opts.grid_spacing > 0.0 ? opts.grid_spacing : 0.1;
    }
    if (opts.seed_set) t2.base_seed = opts.seed;
    Table2Result res = run_table2(t2);
    std::printf("%s", render_report(res.report, ReportFormat::Markdown).c_str());
    for (const std::string& f : res.failed_rows) {
        std::printf("FAILED: %s\n", f.c_str());
    }
    std::printf("wrote %s, %s, %s\n", res.report_csv_path.c_str(),
                res.report_md_path.c_str(), res.annex_path.c_str());
    return res.failed_rows.empty() ? 0 : 1;
}

int cmd_sweep(const CommonOpts& opts, const std::vector<int>& k_values,
              std::vector<double> thresholds) {
    Scenario train_sc = load_with_overrides(opts);
    Scenario test_sc = train_sc;
    test_sc.base_seed = derive_seed(train_sc.base_seed, 0x7E57, 1);
    if (thresholds.empty()) thresholds = table2_thresholds();

    FingerprintDataset train = generate_campaign(train_sc, opts.threads);
    FingerprintDataset test = generate_campaign(test_sc, opts.threads);

    fs::create_directories(opts.out_dir);
    std::string path = (fs::path(opts.out_dir) / "sweep.csv").string();
    std::ofstream out(path);
    out << "k";
    for (double t : thresholds) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",ped_%g", t);
        out << buf;
    }
    out << "\n";
    for (int k : k_values) {
        EstimatorSpec spec;
        spec.kind = EstimatorKind::Knn;
        spec.knn.k = k;
        EstimatorModel model = fit(spec, train, opts.seed_set ? opts.seed : 1);
        std::vector<double> errors = prediction_errors(model, test);
        std::vector<double> acc = accuracy_curve(errors, thresholds);
        out << k;
        for (double a : acc) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), ",%.3f", a);
            out << buf;
        }
        out << "\n";
        std::printf("k=%d: accuracy at %.1f m = %.3f\n", k, thresholds[0],
                    acc[0]);
    }
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_scenario) {
    if (with_scenario) {
        cmd->add_option("--scenario", opts.scenario_path,
                        "Scenario configuration JSON")
            ->required();
        cmd->add_option("--runs", opts.runs, "Override the number of runs");
        cmd->add_option("--grid-spacing", opts.grid_spacing,
                        "Override the receiver grid spacing (m)");
    }
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--seed", opts.seed, "Base seed override")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--threads", opts.threads, "Parallelism degree");
    cmd->add_flag("--snap-grid", opts.snap_grid,
                  "Snap predictions to the receiver grid");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RSS fingerprint localization simulator and evaluator"};
    app.require_subcommand(1);

    CommonOpts gen_opts, fit_opts, eval_opts, rep_opts, sweep_opts;
    apply_env(gen_opts);
    apply_env(fit_opts);
    apply_env(eval_opts);
    apply_env(rep_opts);
    apply_env(sweep_opts);

    auto* gen = app.add_subcommand(
        "generate", "Generate train/test fingerprint campaigns");
    add_common(gen, gen_opts, true);

    auto* fitc = app.add_subcommand("fit", "Train a localizer on a campaign");
    std::string train_path, estimator = "knn";
    int knn_k = 0, mlp_epochs = 0;
    std::size_t svr_max_rows = 0;
    fitc->add_option("--train", train_path, "Training CSV")->required();
    fitc->add_option("--estimator", estimator,
                     "knn | mlp | svr | classic-vlc | classic-rf");
    fitc->add_option("--k", knn_k, "KNN neighbor count");
    fitc->add_option("--epochs", mlp_epochs, "MLP training epochs");
    fitc->add_option("--svr-max-rows", svr_max_rows, "SVR training row cap");
    add_common(fitc, fit_opts, false);

    auto* evalc = app.add_subcommand("evaluate", "Evaluate fitted models");
    std::vector<std::string> model_paths;
    std::string test_path, label;
    std::vector<double> thresholds;
    evalc->add_option("--model", model_paths,
                      "Model JSON file(s); two for per-axis models")
        ->required();
    evalc->add_option("--test", test_path, "Test CSV")->required();
    evalc->add_option("--thresholds", thresholds, "PED thresholds (m)");
    evalc->add_option("--label", label, "Method label for the report row");
    add_common(evalc, eval_opts, false);

    auto* rep = app.add_subcommand("reproduce-table2",
                                   "Run the full accuracy-table pipeline");
    std::string scale = "desk";
    rep->add_option("--scale", scale, "full | desk")
        ->check(CLI::IsMember({"full", "desk"}));
    add_common(rep, rep_opts, false);

    auto* sweep = app.add_subcommand("sweep", "KNN hyperparameter sweep");
    std::vector<int> k_values{1, 3, 5};
    std::vector<double> sweep_thresholds;
    sweep->add_option("--k-values", k_values, "KNN k values to sweep");
    sweep->add_option("--thresholds", sweep_thresholds, "PED thresholds (m)");
    add_common(sweep, sweep_opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(gen_opts);
        if (fitc->parsed()) {
            return cmd_fit(fit_opts, train_path, estimator, knn_k, mlp_epochs,
                           svr_max_rows);
        }
        if (evalc->parsed()) {
            return cmd_evaluate(eval_opts, model_paths, test_path, thresholds,
                                label);
        }
        if (rep->parsed()) return cmd_reproduce(rep_opts, scale);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, k_values,
                                              sweep_thresholds);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
