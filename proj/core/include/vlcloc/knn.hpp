#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "vlcloc/regressor.hpp"

namespace vlcloc {

struct KnnParams {
    int k = 3;
};

/// Non-parametric axis regressor: stores the (scaled) fingerprints verbatim
/// and predicts as the uniform mean of the k nearest targets. The feature
/// matrix is shared between axis models.
class KnnRegressor : public AxisRegressor {
public:
    KnnRegressor(std::shared_ptr<const Matrix> fingerprints,
                 std::vector<double> targets, int k);

    double predict(std::span<const double> features) const override;
    std::string kind() const override { return "knn"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<KnnRegressor> from_json(const nlohmann::json& j);

    /// k nearest training rows by Euclidean distance in scaled feature
    /// space, ascending; ties broken by lowest training-row index.
    std::vector<std::pair<std::size_t, double>> neighbors(
        std::span<const double> features, int k) const;

    std::size_t rows() const { return fingerprints_->rows; }
    const Matrix& fingerprints() const { return *fingerprints_; }
    std::shared_ptr<const Matrix> shared_fingerprints() const {
        return fingerprints_;
    }

private:
    std::shared_ptr<const Matrix> fingerprints_;
    std::vector<double> targets_;
    int k_;
};

}  // namespace vlcloc
