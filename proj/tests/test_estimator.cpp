#include <unistd.h>

#include <cmath>
#include <filesystem>

#include <stdexcept>

#include "doctest.h"
#include "vlcloc/estimator.hpp"
#include "vlcloc/eval.hpp"

using namespace vlcloc;
namespace fs = std::filesystem;

namespace {

Scenario small_scenario() {
    Scenario s;
    s.name = "small";
    s.layout.kind = AnchorLayoutKind::GridLed;
    // 1 m LED spacing keeps every receiver inside some LED's field of
    // view, so noise-free fingerprints are unique per position.
    s.layout.led_spacing = 1.0;
    s.grid.spacing = 0.5;
    s.n_runs = 2;
    s.base_seed = 55;
    s.orientation.mode = OrientationMode::StrictAzimuth;
    s.orientation.fixed_tilt = 0.0;
    return s;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vlcloc_est_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::span<const double> row_of(const FingerprintDataset& ds, std::size_t r) {
    return {ds.features.row(r), ds.n_features()};
}

}  // namespace

TEST_CASE("KNN model localizes a noise-free grid nearly exactly") {
    Scenario s = small_scenario();
    s.channel.noise.vlc_relative_sigma = 0.0;
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec spec;
    spec.kind = EstimatorKind::Knn;
    spec.knn.k = 1;
    EstimatorModel model = fit(spec, train, 7);
    auto errors = prediction_errors(model, train);
    for (double e : errors) CHECK(e < 1e-9);
}

TEST_CASE("knn_neighbors of a training row starts with itself") {
    Scenario s = small_scenario();
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec spec;
    spec.kind = EstimatorKind::Knn;
    EstimatorModel model = fit(spec, train, 7);
    auto nb = knn_neighbors(model, row_of(train, 42), 3);
    REQUIRE(nb.size() == 3);
    CHECK(nb[0].first == 42);
    CHECK(nb[0].second == doctest::Approx(0.0));
}

TEST_CASE("fitted models round-trip through save_model/load_model") {
    Scenario s = small_scenario();
    FingerprintDataset train = generate_run(s, 0);
    TempDir tmp;

    for (EstimatorKind kind :
         {EstimatorKind::Knn, EstimatorKind::Mlp, EstimatorKind::Svr}) {
        EstimatorSpec spec;
        spec.kind = kind;
        spec.mlp.epochs = 5;
        spec.svr.max_rows = 200;
        EstimatorModel model = fit(spec, train, 11);
        std::vector<std::string> paths;
        save_model(model, tmp.path.string(), estimator_kind_name(kind), &paths);
        REQUIRE(paths.size() == 2);
        EstimatorModel back = load_model(paths);
        CHECK(back.spec.kind == kind);
        CHECK(back.train_rows == model.train_rows);
        for (std::size_t r = 0; r < 20; ++r) {
            auto a = model.predict(row_of(train, r));
            auto b = back.predict(row_of(train, r));
            CHECK(a.first == b.first);
            CHECK(a.second == b.second);
        }
    }
}

TEST_CASE("classic models serialize their manifest in one file") {
    Scenario s = small_scenario();
    FingerprintDataset train = generate_run(s, 0);
    TempDir tmp;
    EstimatorSpec spec;
    spec.kind = EstimatorKind::ClassicVlc;
    EstimatorModel model = fit(spec, train, 0);
    std::vector<std::string> paths;
    save_model(model, tmp.path.string(), "classic", &paths);
    REQUIRE(paths.size() == 1);
    EstimatorModel back = load_model(paths);
    CHECK(back.manifest.anchors.size() == train.manifest.anchors.size());
    auto a = model.predict(row_of(train, 10));
    auto b = back.predict(row_of(train, 10));
    CHECK(a.first == doctest::Approx(b.first).epsilon(1e-12));
    CHECK(a.second == doctest::Approx(b.second).epsilon(1e-12));
}

TEST_CASE("model JSON is versioned and spec round-trips") {
    EstimatorSpec spec;
    spec.kind = EstimatorKind::Svr;
    spec.svr.c = 42.0;
    spec.knn.k = 9;
    spec.linear_features = true;
    EstimatorSpec back = EstimatorSpec::from_json(spec.to_json());
    CHECK(back.kind == EstimatorKind::Svr);
    CHECK(back.svr.c == 42.0);
    CHECK(back.knn.k == 9);
    CHECK(back.linear_features);

    Scenario s = small_scenario();
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec knn_spec;
    EstimatorModel model = fit(knn_spec, train, 1);
    auto j = model_axis_to_json(model, 'x');
    CHECK(j.at("schema_version").get<int>() == 1);
    CHECK(j.at("axis").get<std::string>() == "x");
    CHECK(j.contains("regressor"));
}

TEST_CASE("estimator kind names round-trip and bad names throw") {
    for (EstimatorKind kind :
         {EstimatorKind::Knn, EstimatorKind::Mlp, EstimatorKind::Svr,
          EstimatorKind::ClassicVlc, EstimatorKind::ClassicRf}) {
        CHECK(estimator_kind_from_name(estimator_kind_name(kind)) == kind);
    }
    CHECK_THROWS_AS(estimator_kind_from_name("nope"), std::invalid_argument);
}

TEST_CASE("spec validation rejects bad hyperparameters") {
    EstimatorSpec spec;
    spec.knn.k = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = EstimatorSpec{};
    spec.kind = EstimatorKind::Mlp;
    spec.mlp.epochs = -1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = EstimatorSpec{};
    spec.kind = EstimatorKind::Svr;
    spec.svr.epsilon = -0.1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("prediction arity mismatches are rejected") {
    Scenario s = small_scenario();
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec spec;
    EstimatorModel model = fit(spec, train, 1);
    std::vector<double> wrong(train.n_features() + 1, -50.0);
    CHECK_THROWS_AS(model.predict(wrong), std::invalid_argument);

    // prediction_errors checks arity up front.
    Scenario other = small_scenario();
    other.layout.led_spacing = 3.0;
    FingerprintDataset mismatched = generate_run(other, 0);
    CHECK_THROWS_AS(prediction_errors(model, mismatched),
                    std::invalid_argument);
}

TEST_CASE("SVR fits honor the subsample cap deterministically") {
    Scenario s = small_scenario();
    FingerprintDataset train = generate_campaign(s);
    EstimatorSpec spec;
    spec.kind = EstimatorKind::Svr;
    spec.svr.max_rows = 150;
    FitDiagnostics d1, d2;
    EstimatorModel a = fit(spec, train, 3, &d1);
    EstimatorModel b = fit(spec, train, 3, &d2);
    CHECK(d1.subsampled);
    CHECK(d1.rows_used == 150);
    CHECK(d2.rows_used == 150);
    auto pa = a.predict(row_of(train, 0));
    auto pb = b.predict(row_of(train, 0));
    CHECK(pa.first == pb.first);
    CHECK(pa.second == pb.second);
}
