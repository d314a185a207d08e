#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include <stdexcept>

#include "doctest.h"
#include "vlcloc/knn.hpp"
#include "vlcloc/rng.hpp"

using namespace vlcloc;

namespace {

// Independent O(n^2) reference: full sort on (distance, index).
std::vector<std::size_t> brute_force_knn(const Matrix& X,
                                         std::span<const double> q, int k) {
    std::vector<std::pair<double, std::size_t>> d(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < X.cols; ++c) {
            double diff = X(r, c) - q[c];
            acc += diff * diff;
        }
        d[r] = {acc, r};
    }
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> out;
    for (int i = 0; i < k; ++i) out.push_back(d[i].second);
    return out;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Matrix m(rows, cols);
    RngStream rng(seed);
    for (double& v : m.data) v = rng.uniform(-5.0, 5.0);
    return m;
}

KnnRegressor make_knn(Matrix X, std::vector<double> y, int k) {
    return KnnRegressor(std::make_shared<const Matrix>(std::move(X)),
                        std::move(y), k);
}

}  // namespace

TEST_CASE("neighbors agree with the brute-force reference") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Matrix X = random_matrix(500, 8, seed);
        std::vector<double> y(500, 0.0);
        KnnRegressor knn = make_knn(X, y, 5);
        RngStream rng(seed + 100);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> q(8);
            for (double& v : q) v = rng.uniform(-5.0, 5.0);
            auto got = knn.neighbors(q, 5);
            auto want = brute_force_knn(X, q, 5);
            REQUIRE(got.size() == 5);
            for (int i = 0; i < 5; ++i) {
                CHECK(got[i].first == want[i]);
            }
            // Distances ascending and consistent with the index.
            for (int i = 1; i < 5; ++i) CHECK(got[i].second >= got[i - 1].second);
        }
    }
}

TEST_CASE("k=1 on a training point recovers its own target") {
    Matrix X = random_matrix(50, 4, 9);
    std::vector<double> y(50);
    for (std::size_t i = 0; i < 50; ++i) y[i] = 10.0 * i;
    KnnRegressor knn = make_knn(X, y, 1);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(knn.predict(std::span<const double>(X.row(i), X.cols)) == y[i]);
    }
}

TEST_CASE("k=2 prediction is the midpoint of two equidistant targets") {
    Matrix X(2, 1);
    X(0, 0) = 0.0;
    X(1, 0) = 2.0;
    KnnRegressor knn = make_knn(X, {10.0, 30.0}, 2);
    double q = 1.0;
    CHECK(knn.predict(std::span<const double>(&q, 1)) == doctest::Approx(20.0));
}

TEST_CASE("exact ties break toward the lowest training index") {
    // Four identical rows: neighbors must come back as 0, 1, 2.
    Matrix X(4, 2);
    for (double& v : X.data) v = 1.0;
    KnnRegressor knn = make_knn(X, {1.0, 2.0, 3.0, 4.0}, 3);
    std::vector<double> q{1.0, 1.0};
    auto nb = knn.neighbors(q, 3);
    REQUIRE(nb.size() == 3);
    CHECK(nb[0].first == 0);
    CHECK(nb[1].first == 1);
    CHECK(nb[2].first == 2);
    CHECK(knn.predict(q) == doctest::Approx(2.0));
}

TEST_CASE("predictions are invariant to a common feature offset") {
    Matrix X = random_matrix(100, 6, 21);
    std::vector<double> y(100);
    RngStream rng(22);
    for (double& v : y) v = rng.uniform(0.0, 10.0);

    Matrix shifted = X;
    for (double& v : shifted.data) v += 42.0;

    KnnRegressor a = make_knn(X, y, 3);
    KnnRegressor b = make_knn(shifted, y, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> q(6), qs(6);
        for (std::size_t c = 0; c < 6; ++c) {
            q[c] = rng.uniform(-5.0, 5.0);
            qs[c] = q[c] + 42.0;
        }
        CHECK(a.predict(q) == doctest::Approx(b.predict(qs)).epsilon(1e-12));
    }
}

TEST_CASE("JSON round-trip preserves predictions exactly") {
    Matrix X = random_matrix(30, 3, 5);
    std::vector<double> y(30);
    for (std::size_t i = 0; i < 30; ++i) y[i] = 0.5 * i;
    KnnRegressor knn = make_knn(X, y, 4);
    auto back = KnnRegressor::from_json(knn.to_json());
    RngStream rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> q(3);
        for (double& v : q) v = rng.uniform(-5.0, 5.0);
        CHECK(back->predict(q) == knn.predict(q));
    }
}

TEST_CASE("degenerate parameters are rejected") {
    Matrix X = random_matrix(5, 2, 1);
    std::vector<double> y(5, 0.0);
    CHECK_THROWS_AS(make_knn(X, y, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_knn(X, y, 6), std::invalid_argument);
    CHECK_THROWS_AS(make_knn(X, {1.0, 2.0}, 1), std::invalid_argument);
    KnnRegressor ok = make_knn(X, y, 2);
    std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(ok.predict(wrong), std::invalid_argument);
}
