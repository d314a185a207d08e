#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "vlcloc/regressor.hpp"

namespace vlcloc {

struct MlpParams {
    std::vector<int> hidden{64, 64};
    int epochs = 200;
    int batch = 256;
    double learning_rate = 1e-3;
    double momentum = 0.9;
};

struct MlpFitDiagnostics {
    double first_epoch_mse = 0.0;
    double last_epoch_mse = 0.0;
    int epochs = 0;
};

/// Fully connected network with ReLU hidden layers and a linear output,
/// trained by mini-batch SGD with momentum on mean-squared error.
/// Targets are standardized internally; predict returns original units.
class MlpRegressor : public AxisRegressor {
public:
    struct Layer {
        Matrix weights;  // out x in
        std::vector<double> bias;
    };

    /// Untrained network with seeded scaled-uniform initialization.
    MlpRegressor(std::size_t n_inputs, const std::vector<int>& hidden,
                 std::uint64_t seed);

    static std::unique_ptr<MlpRegressor> fit(const Matrix& features,
                                             const std::vector<double>& targets,
                                             const MlpParams& params,
                                             std::uint64_t seed,
                                             MlpFitDiagnostics* diag = nullptr);

    double predict(std::span<const double> features) const override;
    std::string kind() const override { return "mlp"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<MlpRegressor> from_json(const nlohmann::json& j);

    // Raw-network surface for the finite-difference harness. Operates on
    // the network's own scale (no target standardization).
    double loss(const Matrix& features, const std::vector<double>& targets) const;
    std::vector<double> gradient(const Matrix& features,
                                 const std::vector<double>& targets) const;
    std::vector<double> get_params() const;
    void set_params(const std::vector<double>& flat);

    std::size_t n_inputs() const { return n_inputs_; }

private:
    MlpRegressor() = default;

    double forward(const double* input, std::vector<std::vector<double>>* acts,
                   std::vector<std::vector<double>>* pre) const;
    void accumulate_gradient(const double* input, double target,
                             std::vector<Layer>& grad) const;

    std::size_t n_inputs_ = 0;
    std::vector<Layer> layers_;
    double target_mean_ = 0.0;
    double target_scale_ = 1.0;
};

/// Max relative disagreement between backprop and central finite
/// differences (step 1e-5) over every parameter of a freshly initialized
/// network on the given data.
double mlp_gradient_check(const MlpParams& params, const Matrix& features,
                          const std::vector<double>& targets,
                          std::uint64_t seed);

}  // namespace vlcloc
