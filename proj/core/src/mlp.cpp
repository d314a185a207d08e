#include "vlcloc/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vlcloc/rng.hpp"

namespace vlcloc {

MlpRegressor::MlpRegressor(std::size_t n_inputs, const std::vector<int>& hidden,
                           std::uint64_t seed)
    : n_inputs_(n_inputs) {
    if (n_inputs == 0) throw std::invalid_argument("network needs inputs");
    for (int h : hidden) {
        if (h < 1) throw std::invalid_argument("hidden layer size must be >= 1");
    }
    std::vector<std::size_t> sizes;
    sizes.push_back(n_inputs);
    for (int h : hidden) sizes.push_back(static_cast<std::size_t>(h));
    sizes.push_back(1);

    RngStream rng(derive_seed(seed, 0x4D4C50, 0));
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Layer layer;
        layer.weights = Matrix(sizes[l + 1], sizes[l]);
        layer.bias.assign(sizes[l + 1], 0.0);
        double bound = std::sqrt(6.0 / (sizes[l] + sizes[l + 1]));
        for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
        layers_.push_back(std::move(layer));
    }
}

double MlpRegressor::forward(const double* input,
                             std::vector<std::vector<double>>* acts,
                             std::vector<std::vector<double>>* pre) const {
    std::vector<double> cur(input, input + n_inputs_);
    if (acts) acts->push_back(cur);
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const Layer& layer = layers_[l];
        std::vector<double> next(layer.bias);
        for (std::size_t o = 0; o < layer.weights.rows; ++o) {
            const double* w = layer.weights.row(o);
            double acc = 0.0;
            for (std::size_t i = 0; i < layer.weights.cols; ++i) {
                acc += w[i] * cur[i];
            }
            next[o] += acc;
        }
        if (pre) pre->push_back(next);
        bool last = (l + 1 == layers_.size());
        if (!last) {
            for (double& v : next) v = std::max(v, 0.0);  // ReLU
        }
        if (acts && !last) acts->push_back(next);
        cur = std::move(next);
    }
    return cur[0];
}

void MlpRegressor::accumulate_gradient(const double* input, double target,
                                       std::vector<Layer>& grad) const {
    std::vector<std::vector<double>> acts;  // inputs to each layer
    std::vector<std::vector<double>> pre;   // pre-activation of each layer
    double out = forward(input, &acts, &pre);

    // d(residual^2)/d(out); caller divides by the sample count.
    std::vector<double> delta{2.0 * (out - target)};
    for (std::size_t l = layers_.size(); l-- > 0;) {
        const Layer& layer = layers_[l];
        const std::vector<double>& in = acts[l];
        Layer& g = grad[l];
        for (std::size_t o = 0; o < layer.weights.rows; ++o) {
            g.bias[o] += delta[o];
            double* gw = g.weights.row(o);
            for (std::size_t i = 0; i < layer.weights.cols; ++i) {
                gw[i] += delta[o] * in[i];
            }
        }
        if (l == 0) break;
        std::vector<double> prev_delta(layer.weights.cols, 0.0);
        for (std::size_t o = 0; o < layer.weights.rows; ++o) {
            const double* w = layer.weights.row(o);
            for (std::size_t i = 0; i < layer.weights.cols; ++i) {
                prev_delta[i] += delta[o] * w[i];
            }
        }
        // ReLU derivative of the previous layer's pre-activation.
        for (std::size_t i = 0; i < prev_delta.size(); ++i) {
            if (pre[l - 1][i] <= 0.0) prev_delta[i] = 0.0;
        }
        delta = std::move(prev_delta);
    }
}

double MlpRegressor::loss(const Matrix& features,
                          const std::vector<double>& targets) const {
    double sum = 0.0;
    for (std::size_t r = 0; r < features.rows; ++r) {
        double d = forward(features.row(r), nullptr, nullptr) - targets[r];
        sum += d * d;
    }
    return sum / features.rows;
}

std::vector<double> MlpRegressor::gradient(
    const Matrix& features, const std::vector<double>& targets) const {
    std::vector<Layer> grad;
    for (const Layer& l : layers_) {
        grad.push_back({Matrix(l.weights.rows, l.weights.cols),
                        std::vector<double>(l.bias.size(), 0.0)});
    }
    for (std::size_t r = 0; r < features.rows; ++r) {
        accumulate_gradient(features.row(r), targets[r], grad);
    }
    std::vector<double> flat;
    for (const Layer& g : grad) {
        for (double v : g.weights.data) flat.push_back(v / features.rows);
        for (double v : g.bias) flat.push_back(v / features.rows);
    }
    return flat;
}

std::vector<double> MlpRegressor::get_params() const {
    std::vector<double> flat;
    for (const Layer& l : layers_) {
        flat.insert(flat.end(), l.weights.data.begin(), l.weights.data.end());
        flat.insert(flat.end(), l.bias.begin(), l.bias.end());
    }
    return flat;
}

void MlpRegressor::set_params(const std::vector<double>& flat) {
    std::size_t pos = 0;
    for (Layer& l : layers_) {
        std::copy(flat.begin() + pos, flat.begin() + pos + l.weights.data.size(),
                  l.weights.data.begin());
        pos += l.weights.data.size();
        std::copy(flat.begin() + pos, flat.begin() + pos + l.bias.size(),
                  l.bias.begin());
        pos += l.bias.size();
    }
    if (pos != flat.size()) {
        throw std::invalid_argument("parameter vector size mismatch");
    }
}

std::unique_ptr<MlpRegressor> MlpRegressor::fit(
    const Matrix& features, const std::vector<double>& targets,
    const MlpParams& params, std::uint64_t seed, MlpFitDiagnostics* diag) {
    if (features.rows == 0 || targets.size() != features.rows) {
        throw std::invalid_argument("bad training data for MLP");
    }
    if (params.epochs < 1 || params.batch < 1) {
        throw std::invalid_argument("epochs and batch must be >= 1");
    }
    auto net = std::make_unique<MlpRegressor>(features.cols, params.hidden, seed);

    // Standardize targets so the learning rate is insensitive to room size.
    double mean = std::accumulate(targets.begin(), targets.end(), 0.0) /
                  targets.size();
    double var = 0.0;
    for (double t : targets) var += (t - mean) * (t - mean);
    var /= targets.size();
    net->target_mean_ = mean;
    net->target_scale_ = var > 0.0 ? std::sqrt(var) : 1.0;
    std::vector<double> scaled(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        scaled[i] = (targets[i] - net->target_mean_) / net->target_scale_;
    }

    std::vector<Layer> velocity;
    std::vector<Layer> grad;
    for (const Layer& l : net->layers_) {
        velocity.push_back({Matrix(l.weights.rows, l.weights.cols),
                            std::vector<double>(l.bias.size(), 0.0)});
        grad.push_back({Matrix(l.weights.rows, l.weights.cols),
                        std::vector<double>(l.bias.size(), 0.0)});
    }

    RngStream shuffle_rng(derive_seed(seed, 0x534746, 1));
    std::vector<std::size_t> order(features.rows);
    std::iota(order.begin(), order.end(), 0);

    double first_mse = 0.0, last_mse = 0.0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = shuffle_rng.next_u64() % i;
            std::swap(order[i - 1], order[j]);
        }
        double epoch_sse = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += params.batch) {
            std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(params.batch));
            for (Layer& g : grad) {
                std::fill(g.weights.data.begin(), g.weights.data.end(), 0.0);
                std::fill(g.bias.begin(), g.bias.end(), 0.0);
            }
            for (std::size_t i = start; i < end; ++i) {
                std::size_t r = order[i];
                double pred =
                    net->forward(features.row(r), nullptr, nullptr);
                double d = pred - scaled[r];
                epoch_sse += d * d;
                net->accumulate_gradient(features.row(r), scaled[r], grad);
            }
            double inv = 1.0 / static_cast<double>(end - start);
            for (std::size_t l = 0; l < net->layers_.size(); ++l) {
                Layer& w = net->layers_[l];
                Layer& v = velocity[l];
                Layer& g = grad[l];
                for (std::size_t i = 0; i < w.weights.data.size(); ++i) {
                    v.weights.data[i] = params.momentum * v.weights.data[i] -
                                        params.learning_rate * g.weights.data[i] * inv;
                    w.weights.data[i] += v.weights.data[i];
                }
                for (std::size_t i = 0; i < w.bias.size(); ++i) {
                    v.bias[i] = params.momentum * v.bias[i] -
                                params.learning_rate * g.bias[i] * inv;
                    w.bias[i] += v.bias[i];
                }
            }
        }
        double mse = epoch_sse / features.rows;
        if (epoch == 0) first_mse = mse;
        last_mse = mse;
    }
    if (diag) {
        diag->first_epoch_mse = first_mse;
        diag->last_epoch_mse = last_mse;
        diag->epochs = params.epochs;
    }
    return net;
}

double MlpRegressor::predict(std::span<const double> features) const {
    if (features.size() != n_inputs_) {
        throw std::invalid_argument("feature arity mismatch");
    }
    double out = forward(features.data(), nullptr, nullptr);
    return out * target_scale_ + target_mean_;
}

nlohmann::json MlpRegressor::to_json() const {
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : layers_) {
        layers.push_back({{"rows", l.weights.rows},
                          {"cols", l.weights.cols},
                          {"weights", l.weights.data},
                          {"bias", l.bias}});
    }
    return {{"n_inputs", n_inputs_},
            {"layers", layers},
            {"target_mean", target_mean_},
            {"target_scale", target_scale_}};
}

std::unique_ptr<MlpRegressor> MlpRegressor::from_json(const nlohmann::json& j) {
    auto net = std::unique_ptr<MlpRegressor>(new MlpRegressor());
    net->n_inputs_ = j.at("n_inputs").get<std::size_t>();
    for (const auto& lj : j.at("layers")) {
        Layer l;
        l.weights = Matrix(lj.at("rows").get<std::size_t>(),
                           lj.at("cols").get<std::size_t>());
        l.weights.data = lj.at("weights").get<std::vector<double>>();
        l.bias = lj.at("bias").get<std::vector<double>>();
        net->layers_.push_back(std::move(l));
    }
    net->target_mean_ = j.at("target_mean").get<double>();
    net->target_scale_ = j.at("target_scale").get<double>();
    return net;
}

double mlp_gradient_check(const MlpParams& params, const Matrix& features,
                          const std::vector<double>& targets,
                          std::uint64_t seed) {
    MlpRegressor net(features.cols, params.hidden, seed);
    std::vector<double> analytic = net.gradient(features, targets);
    std::vector<double> flat = net.get_params();
    const double step = 1e-5;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        double saved = flat[i];
        flat[i] = saved + step;
        net.set_params(flat);
        double plus = net.loss(features, targets);
        flat[i] = saved - step;
        net.set_params(flat);
        double minus = net.loss(features, targets);
        flat[i] = saved;
        double fd = (plus - minus) / (2.0 * step);
        double denom = std::max({std::fabs(fd), std::fabs(analytic[i]), 1.0});
        max_rel = std::max(max_rel, std::fabs(fd - analytic[i]) / denom);
    }
    net.set_params(flat);
    return max_rel;
}

}  // namespace vlcloc
