#include <cmath>
#include <vector>

#include <stdexcept>

#include "doctest.h"
#include "vlcloc/mlp.hpp"
#include "vlcloc/rng.hpp"

using namespace vlcloc;

namespace {

// Smooth nonlinear target on [-1, 1]^d.
void make_data(std::size_t rows, std::size_t cols, std::uint64_t seed,
               Matrix* X, std::vector<double>* y) {
    *X = Matrix(rows, cols);
    y->resize(rows);
    RngStream rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            double v = rng.uniform(-1.0, 1.0);
            (*X)(r, c) = v;
            acc += v;
        }
        (*y)[r] = std::sin(acc) + 0.2 * acc;
    }
}

}  // namespace

TEST_CASE("backprop matches central finite differences") {
    Matrix X;
    std::vector<double> y;
    make_data(32, 5, 17, &X, &y);
    MlpParams params;
    params.hidden = {8, 6};
    double err = mlp_gradient_check(params, X, y, 123);
    CHECK(err < 1e-4);
}

TEST_CASE("gradient check holds for a single hidden layer too") {
    Matrix X;
    std::vector<double> y;
    make_data(16, 3, 4, &X, &y);
    MlpParams params;
    params.hidden = {10};
    CHECK(mlp_gradient_check(params, X, y, 7) < 1e-4);
}

TEST_CASE("training reduces the epoch loss") {
    Matrix X;
    std::vector<double> y;
    make_data(400, 4, 31, &X, &y);
    MlpParams params;
    params.hidden = {32, 32};
    params.epochs = 200;
    MlpFitDiagnostics diag;
    auto model = MlpRegressor::fit(X, y, params, 5, &diag);
    CHECK(diag.epochs == 200);
    CHECK(diag.last_epoch_mse < diag.first_epoch_mse);
    CHECK(diag.last_epoch_mse < 0.25 * diag.first_epoch_mse);
}

TEST_CASE("a trained model beats the mean predictor on its training set") {
    Matrix X;
    std::vector<double> y;
    make_data(400, 4, 77, &X, &y);
    MlpParams params;
    params.hidden = {32, 32};
    params.epochs = 200;
    auto model = MlpRegressor::fit(X, y, params, 5);

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= y.size();
    double mse_model = 0.0, mse_mean = 0.0;
    for (std::size_t r = 0; r < X.rows; ++r) {
        double p = model->predict(std::span<const double>(X.row(r), X.cols));
        mse_model += (p - y[r]) * (p - y[r]);
        mse_mean += (mean - y[r]) * (mean - y[r]);
    }
    CHECK(mse_model < 0.3 * mse_mean);
}

TEST_CASE("fits are bit-deterministic in the seed") {
    Matrix X;
    std::vector<double> y;
    make_data(200, 3, 2, &X, &y);
    MlpParams params;
    params.hidden = {16};
    params.epochs = 20;
    auto a = MlpRegressor::fit(X, y, params, 99);
    auto b = MlpRegressor::fit(X, y, params, 99);
    auto c = MlpRegressor::fit(X, y, params, 100);
    std::vector<double> q{0.3, -0.4, 0.9};
    CHECK(a->predict(q) == b->predict(q));
    CHECK(a->predict(q) != c->predict(q));
}

TEST_CASE("JSON round-trip preserves predictions exactly") {
    Matrix X;
    std::vector<double> y;
    make_data(100, 4, 12, &X, &y);
    MlpParams params;
    params.hidden = {12, 8};
    params.epochs = 15;
    auto model = MlpRegressor::fit(X, y, params, 3);
    auto back = MlpRegressor::from_json(model->to_json());
    RngStream rng(4);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> q(4);
        for (double& v : q) v = rng.uniform(-1.0, 1.0);
        CHECK(back->predict(q) == model->predict(q));
    }
}

TEST_CASE("bad inputs are rejected") {
    Matrix X;
    std::vector<double> y;
    make_data(10, 2, 1, &X, &y);
    MlpParams params;
    auto model = MlpRegressor::fit(X, y, params, 1);
    std::vector<double> wrong{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(model->predict(wrong), std::invalid_argument);
    std::vector<double> short_y(9, 0.0);
    CHECK_THROWS_AS(MlpRegressor::fit(X, short_y, params, 1),
                    std::invalid_argument);
    params.hidden = {0};
    CHECK_THROWS_AS(MlpRegressor::fit(X, y, params, 1), std::invalid_argument);
}
