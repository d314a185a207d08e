#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vlcloc/classic.hpp"
#include "vlcloc/dataset.hpp"
#include "vlcloc/knn.hpp"
#include "vlcloc/mlp.hpp"
#include "vlcloc/scaler.hpp"
#include "vlcloc/svr.hpp"

namespace vlcloc {

enum class EstimatorKind { Knn, Mlp, Svr, ClassicVlc, ClassicRf };

std::string estimator_kind_name(EstimatorKind kind);
EstimatorKind estimator_kind_from_name(const std::string& name);

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::Knn;
    Scaling scaling = Scaling::ZScore;
    bool linear_features = false;  // train on linear milliwatts instead of dBm
    KnnParams knn;
    MlpParams mlp;
    SvrParams svr;

    void validate() const;
    nlohmann::json to_json() const;
    static EstimatorSpec from_json(const nlohmann::json& j);
};

struct FitDiagnostics {
    std::size_t rows_used = 0;
    bool subsampled = false;
    MlpFitDiagnostics mlp_x, mlp_y;
    SvrFitDiagnostics svr_x, svr_y;
};

/// A fitted per-axis localizer. Immutable after fit; predict is pure and
/// thread-safe.
struct EstimatorModel {
    EstimatorSpec spec;
    FeatureScaler scaler;
    std::unique_ptr<AxisRegressor> axis_x;  // null for classic baselines
    std::unique_ptr<AxisRegressor> axis_y;
    AnchorManifest manifest;  // drives the classic baselines
    std::size_t train_rows = 0;
    std::uint64_t seed = 0;

    std::pair<double, double> predict(std::span<const double> features) const;
    std::size_t n_features() const;
};

EstimatorModel fit(const EstimatorSpec& spec, const FingerprintDataset& train,
                   std::uint64_t seed, FitDiagnostics* diag = nullptr);

/// k nearest fingerprints of a KNN model in scaled feature space,
/// ascending distance, ties to the lowest training-row index.
std::vector<std::pair<std::size_t, double>> knn_neighbors(
    const EstimatorModel& model, std::span<const double> features, int k);

/// Versioned single-axis model document ('x' or 'y'; classic baselines use
/// axis 0 and serialize the anchor manifest instead of a regressor).
nlohmann::json model_axis_to_json(const EstimatorModel& model, char axis);
void save_model(const EstimatorModel& model, const std::string& dir,
                const std::string& name, std::vector<std::string>* paths = nullptr);
EstimatorModel load_model(const std::vector<std::string>& paths);

}  // namespace vlcloc
