#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "vlcloc/regressor.hpp"

namespace vlcloc {

struct SvrParams {
    double c = 10.0;
    double epsilon = 0.05;
    double gamma = 0.0;  // 0 -> 1 / (n_features * feature variance)
    double tol = 1e-3;
    std::size_t max_rows = 5000;  // subsample cap, enforced by the caller
    long max_iterations = 0;      // 0 -> auto
};

struct SvrFitDiagnostics {
    long iterations = 0;
    bool converged = true;
    double final_gap = 0.0;
    std::size_t n_support = 0;
    /// Full dual coefficients aligned with the training rows.
    std::vector<double> beta;
};

/// Epsilon-insensitive support vector regression with an RBF kernel,
/// trained by pairwise SMO (maximal-violating-pair selection).
class SvrRegressor : public AxisRegressor {
public:
    static std::unique_ptr<SvrRegressor> fit(const Matrix& features,
                                             const std::vector<double>& targets,
                                             const SvrParams& params,
                                             SvrFitDiagnostics* diag = nullptr);

    double predict(std::span<const double> features) const override;
    std::string kind() const override { return "svr"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<SvrRegressor> from_json(const nlohmann::json& j);

    double c() const { return c_; }
    double epsilon() const { return epsilon_; }
    double gamma() const { return gamma_; }
    std::size_t n_support() const { return support_.rows; }

private:
    Matrix support_;             // n_sv x d
    std::vector<double> coef_;   // dual coefficients of the support rows
    double bias_ = 0.0;
    double gamma_ = 0.0;
    double c_ = 0.0;
    double epsilon_ = 0.0;
};

/// Max complementarity violation of a fitted model against its training
/// set, given the full dual coefficient vector from fit diagnostics.
double svr_kkt_violation(const SvrRegressor& model, const Matrix& features,
                         const std::vector<double>& targets,
                         const std::vector<double>& beta);

}  // namespace vlcloc
