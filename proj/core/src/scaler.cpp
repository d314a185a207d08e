#include "vlcloc/scaler.hpp"

#include <cmath>
#include <stdexcept>

namespace vlcloc {

FeatureScaler FeatureScaler::fit(const Matrix& features, Scaling mode) {
    if (features.rows == 0) {
        throw std::invalid_argument("cannot fit scaler on empty matrix");
    }
    std::vector<double> mean(features.cols, 0.0);
    std::vector<double> scale(features.cols, 1.0);
    if (mode == Scaling::ZScore) {
        for (std::size_t c = 0; c < features.cols; ++c) {
            double m = 0.0;
            for (std::size_t r = 0; r < features.rows; ++r) m += features(r, c);
            m /= features.rows;
            double var = 0.0;
            for (std::size_t r = 0; r < features.rows; ++r) {
                double d = features(r, c) - m;
                var += d * d;
            }
            var /= features.rows;
            mean[c] = m;
            scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
        }
    }
    return FeatureScaler(std::move(mean), std::move(scale));
}

void FeatureScaler::transform_row(const double* in, double* out) const {
    for (std::size_t c = 0; c < mean_.size(); ++c) {
        out[c] = (in[c] - mean_[c]) / scale_[c];
    }
}

Matrix FeatureScaler::transform(const Matrix& features) const {
    if (features.cols != mean_.size()) {
        throw std::invalid_argument("feature arity does not match scaler");
    }
    Matrix out(features.rows, features.cols);
    for (std::size_t r = 0; r < features.rows; ++r) {
        transform_row(features.row(r), out.row(r));
    }
    return out;
}

}  // namespace vlcloc
