#include "vlcloc/knn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vlcloc {

KnnRegressor::KnnRegressor(std::shared_ptr<const Matrix> fingerprints,
                           std::vector<double> targets, int k)
    : fingerprints_(std::move(fingerprints)),
      targets_(std::move(targets)),
      k_(k) {
    if (k_ < 1) throw std::invalid_argument("k must be >= 1");
    if (!fingerprints_ || fingerprints_->rows == 0) {
        throw std::invalid_argument("empty fingerprint matrix");
    }
    if (targets_.size() != fingerprints_->rows) {
        throw std::invalid_argument("targets/fingerprints row mismatch");
    }
    if (static_cast<std::size_t>(k_) > fingerprints_->rows) {
        throw std::invalid_argument("k exceeds training rows");
    }
}

std::vector<std::pair<std::size_t, double>> KnnRegressor::neighbors(
    std::span<const double> features, int k) const {
    const Matrix& fp = *fingerprints_;
    if (features.size() != fp.cols) {
        throw std::invalid_argument("feature arity mismatch");
    }
    if (k < 1 || static_cast<std::size_t>(k) > fp.rows) {
        throw std::invalid_argument("k out of range");
    }
    std::vector<std::pair<std::size_t, double>> all(fp.rows);
    for (std::size_t r = 0; r < fp.rows; ++r) {
        const double* row = fp.row(r);
        double d2 = 0.0;
        for (std::size_t c = 0; c < fp.cols; ++c) {
            double d = features[c] - row[c];
            d2 += d * d;
        }
        all[r] = {r, d2};
    }
    // (distance, index) order gives the lowest-index-first tie rule.
    auto cmp = [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    };
    std::partial_sort(all.begin(), all.begin() + k, all.end(), cmp);
    all.resize(k);
    for (auto& [idx, d2] : all) d2 = std::sqrt(d2);
    return all;
}

double KnnRegressor::predict(std::span<const double> features) const {
    auto nn = neighbors(features, k_);
    double sum = 0.0;
    for (const auto& [idx, dist] : nn) sum += targets_[idx];
    return sum / nn.size();
}

nlohmann::json KnnRegressor::to_json() const {
    return {{"k", k_},
            {"rows", fingerprints_->rows},
            {"cols", fingerprints_->cols},
            {"fingerprints", fingerprints_->data},
            {"targets", targets_}};
}

std::unique_ptr<KnnRegressor> KnnRegressor::from_json(const nlohmann::json& j) {
    auto fp = std::make_shared<Matrix>(j.at("rows").get<std::size_t>(),
                                       j.at("cols").get<std::size_t>());
    fp->data = j.at("fingerprints").get<std::vector<double>>();
    return std::make_unique<KnnRegressor>(
        std::move(fp), j.at("targets").get<std::vector<double>>(),
        j.at("k").get<int>());
}

}  // namespace vlcloc
