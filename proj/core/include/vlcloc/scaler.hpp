#pragma once

#include <vector>

#include "vlcloc/matrix.hpp"

namespace vlcloc {

enum class Scaling { None, ZScore };

/// Per-column standardization fitted on training features only.
/// Zero-variance columns keep scale 1 so constant features pass through.
class FeatureScaler {
public:
    FeatureScaler() = default;

    static FeatureScaler fit(const Matrix& features, Scaling mode);

    void transform_row(const double* in, double* out) const;
    Matrix transform(const Matrix& features) const;

    std::size_t n_features() const { return mean_.size(); }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& scale() const { return scale_; }

    FeatureScaler(std::vector<double> mean, std::vector<double> scale)
        : mean_(std::move(mean)), scale_(std::move(scale)) {}

private:
    std::vector<double> mean_;
    std::vector<double> scale_;
};

}  // namespace vlcloc
