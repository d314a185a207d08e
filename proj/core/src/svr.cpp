#include "vlcloc/svr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace vlcloc {

namespace {

// Lazily computed RBF kernel rows with FIFO eviction; SMO revisits a small
// active set, so a modest cap keeps memory bounded at large row counts.
class KernelCache {
public:
    KernelCache(const Matrix& x, double gamma, std::size_t max_bytes)
        : x_(x), gamma_(gamma) {
        sq_norm_.resize(x.rows);
        for (std::size_t r = 0; r < x.rows; ++r) {
            double s = 0.0;
            const double* row = x.row(r);
            for (std::size_t c = 0; c < x.cols; ++c) s += row[c] * row[c];
            sq_norm_[r] = s;
        }
        std::size_t row_bytes = x.rows * sizeof(double);
        capacity_ = std::max<std::size_t>(2, max_bytes / std::max<std::size_t>(row_bytes, 1));
    }

    const std::vector<double>& row(std::size_t i) {
        auto it = rows_.find(i);
        if (it != rows_.end()) return it->second;
        if (rows_.size() >= capacity_) {
            rows_.erase(order_.front());
            order_.pop_front();
        }
        std::vector<double> k(x_.rows);
        const double* xi = x_.row(i);
        for (std::size_t j = 0; j < x_.rows; ++j) {
            const double* xj = x_.row(j);
            double dot = 0.0;
            for (std::size_t c = 0; c < x_.cols; ++c) dot += xi[c] * xj[c];
            k[j] = std::exp(-gamma_ * (sq_norm_[i] + sq_norm_[j] - 2.0 * dot));
        }
        order_.push_back(i);
        return rows_.emplace(i, std::move(k)).first->second;
    }

private:
    const Matrix& x_;
    double gamma_;
    std::vector<double> sq_norm_;
    std::size_t capacity_;
    std::unordered_map<std::size_t, std::vector<double>> rows_;
    std::deque<std::size_t> order_;
};

double auto_gamma(const Matrix& x) {
    double mean = 0.0;
    for (double v : x.data) mean += v;
    mean /= x.data.size();
    double var = 0.0;
    for (double v : x.data) var += (v - mean) * (v - mean);
    var /= x.data.size();
    if (var <= 0.0) var = 1.0;
    return 1.0 / (static_cast<double>(x.cols) * var);
}

}  // namespace

std::unique_ptr<SvrRegressor> SvrRegressor::fit(
    const Matrix& features, const std::vector<double>& targets,
    const SvrParams& params, SvrFitDiagnostics* diag) {
    const std::size_t l = features.rows;
    if (l == 0 || targets.size() != l) {
        throw std::invalid_argument("bad training data for SVR");
    }
    if (!(params.c > 0.0) || params.epsilon < 0.0 || params.tol <= 0.0) {
        throw std::invalid_argument("invalid SVR hyperparameters");
    }
    const double C = params.c;
    const double eps = params.epsilon;
    const double gamma = params.gamma > 0.0 ? params.gamma : auto_gamma(features);
    const long max_iter =
        params.max_iterations > 0
            ? params.max_iterations
            : std::max<long>(200000, 100 * static_cast<long>(l));

    // Dual variables: s < l are the upper-tube multipliers, s >= l the
    // lower-tube ones; y_ext is +1 / -1 respectively.
    const std::size_t n = 2 * l;
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n);
    for (std::size_t s = 0; s < l; ++s) {
        grad[s] = eps - targets[s];
        grad[s + l] = eps + targets[s];
    }
    auto y_ext = [l](std::size_t s) { return s < l ? 1.0 : -1.0; };

    KernelCache cache(features, gamma, 256u << 20);

    long iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    bool converged = false;
    while (iter < max_iter) {
        // Maximal violating pair.
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t s = 0; s < n; ++s) {
            double ys = y_ext(s);
            double v = -ys * grad[s];
            bool in_up = (ys > 0.0) ? alpha[s] < C : alpha[s] > 0.0;
            bool in_low = (ys > 0.0) ? alpha[s] > 0.0 : alpha[s] < C;
            if (in_up && v > gmax) {
                gmax = v;
                i = s;
            }
            if (in_low && v < gmin) {
                gmin = v;
                j = s;
            }
        }
        gap = gmax - gmin;
        if (gap < params.tol || i == n || j == n) {
            converged = gap < params.tol;
            break;
        }

        const double yi = y_ext(i), yj = y_ext(j);
        const std::vector<double>& ki = cache.row(i % l);
        const std::vector<double>& kj = cache.row(j % l);
        double quad = ki[i % l] + kj[j % l] - 2.0 * yi * yj * ki[j % l];
        if (quad <= 0.0) quad = 1e-12;

        // Step along the feasible pair direction, clipped to the box.
        double d = gap / quad;
        d = std::min(d, yi > 0.0 ? C - alpha[i] : alpha[i]);
        d = std::min(d, yj > 0.0 ? alpha[j] : C - alpha[j]);
        if (d <= 0.0) break;

        alpha[i] += yi * d;
        alpha[j] -= yj * d;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += y_ext(t) * d * (ki[t % l] - kj[t % l]);
        }
        ++iter;
    }

    if (!converged) {
        std::fprintf(stderr,
                     "vlcloc: SVR did not converge after %ld iterations "
                     "(KKT gap %.3g, tol %.3g); using the best iterate\n",
                     iter, gap, params.tol);
    }

    // Bias from the free variables; fall back to the bound midpoint.
    double lambda_sum = 0.0;
    std::size_t n_free = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (alpha[s] > 0.0 && alpha[s] < C) {
            lambda_sum += y_ext(s) * grad[s];
            ++n_free;
        }
    }
    double lambda;
    if (n_free > 0) {
        lambda = lambda_sum / n_free;
    } else {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n; ++s) {
            double ys = y_ext(s);
            double v = -ys * grad[s];
            bool in_up = (ys > 0.0) ? alpha[s] < C : alpha[s] > 0.0;
            bool in_low = (ys > 0.0) ? alpha[s] > 0.0 : alpha[s] < C;
            if (in_up) gmax = std::max(gmax, v);
            if (in_low) gmin = std::min(gmin, v);
        }
        lambda = -(gmax + gmin) / 2.0;
    }

    std::vector<double> beta(l);
    for (std::size_t s = 0; s < l; ++s) beta[s] = alpha[s] - alpha[s + l];

    auto model = std::unique_ptr<SvrRegressor>(new SvrRegressor());
    model->gamma_ = gamma;
    model->bias_ = -lambda;
    model->c_ = C;
    model->epsilon_ = eps;
    std::size_t n_sv = 0;
    for (double b : beta) {
        if (std::fabs(b) > 1e-12) ++n_sv;
    }
    model->support_ = Matrix(n_sv, features.cols);
    model->coef_.reserve(n_sv);
    std::size_t out = 0;
    for (std::size_t s = 0; s < l; ++s) {
        if (std::fabs(beta[s]) > 1e-12) {
            std::copy(features.row(s), features.row(s) + features.cols,
                      model->support_.row(out));
            model->coef_.push_back(beta[s]);
            ++out;
        }
    }
    if (diag) {
        diag->iterations = iter;
        diag->converged = converged;
        diag->final_gap = gap;
        diag->n_support = n_sv;
        diag->beta = std::move(beta);
    }
    return model;
}

double SvrRegressor::predict(std::span<const double> features) const {
    if (features.size() != support_.cols) {
        throw std::invalid_argument("feature arity mismatch");
    }
    double f = bias_;
    for (std::size_t s = 0; s < support_.rows; ++s) {
        const double* sv = support_.row(s);
        double d2 = 0.0;
        for (std::size_t c = 0; c < support_.cols; ++c) {
            double d = features[c] - sv[c];
            d2 += d * d;
        }
        f += coef_[s] * std::exp(-gamma_ * d2);
    }
    return f;
}

nlohmann::json SvrRegressor::to_json() const {
    return {{"rows", support_.rows},
            {"cols", support_.cols},
            {"support", support_.data},
            {"coef", coef_},
            {"bias", bias_},
            {"gamma", gamma_},
            {"c", c_},
            {"epsilon", epsilon_}};
}

std::unique_ptr<SvrRegressor> SvrRegressor::from_json(const nlohmann::json& j) {
    auto model = std::unique_ptr<SvrRegressor>(new SvrRegressor());
    model->support_ = Matrix(j.at("rows").get<std::size_t>(),
                             j.at("cols").get<std::size_t>());
    model->support_.data = j.at("support").get<std::vector<double>>();
    model->coef_ = j.at("coef").get<std::vector<double>>();
    model->bias_ = j.at("bias").get<double>();
    model->gamma_ = j.at("gamma").get<double>();
    model->c_ = j.at("c").get<double>();
    model->epsilon_ = j.at("epsilon").get<double>();
    return model;
}

double svr_kkt_violation(const SvrRegressor& model, const Matrix& features,
                         const std::vector<double>& targets,
                         const std::vector<double>& beta) {
    if (beta.size() != features.rows) {
        throw std::invalid_argument("beta/feature row mismatch");
    }
    const double C = model.c();
    const double eps = model.epsilon();
    const double bound_slack = 1e-8 * C;
    double worst = 0.0;
    for (std::size_t r = 0; r < features.rows; ++r) {
        double f = model.predict(
            std::span<const double>(features.row(r), features.cols));
        double resid = targets[r] - f;
        double b = beta[r];
        double v = 0.0;
        if (std::fabs(b) <= bound_slack) {
            v = std::max(0.0, std::fabs(resid) - eps);
        } else if (b > 0.0 && b < C - bound_slack) {
            v = std::fabs(resid - eps);  // free upper-tube multiplier
        } else if (b >= C - bound_slack) {
            v = std::max(0.0, eps - resid);  // at the upper bound
        } else if (b < 0.0 && b > -C + bound_slack) {
            v = std::fabs(-resid - eps);
        } else {
            v = std::max(0.0, eps + resid);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

}  // namespace vlcloc
