// Microbenchmarks for the hot paths: channel synthesis, dataset
// generation, nearest-neighbor queries and model fits.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "vlcloc/channel.hpp"
#include "vlcloc/dataset.hpp"
#include "vlcloc/estimator.hpp"
#include "vlcloc/knn.hpp"
#include "vlcloc/scenario.hpp"

using namespace vlcloc;

namespace {

Scenario desk_scenario() {
    Scenario s;
    s.name = "bench";
    s.layout.kind = AnchorLayoutKind::GridLed;
    s.layout.led_spacing = 1.0;
    s.grid.spacing = 0.3;
    s.n_runs = 1;
    s.base_seed = 1;
    s.orientation.mode = OrientationMode::StrictAzimuth;
    return s;
}

void BM_VlcLosGain(benchmark::State& state) {
    VlcEmitterParams em;
    VlcReceiverParams rx;
    Anchor led{{5.0, 5.0, 3.0}, AnchorKind::VlcLed, 0};
    ReceiverPose pose{{4.2, 6.1, 1.0}, {0.1, 0.7}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(vlc_los_gain(led, em, pose, rx));
    }
}
BENCHMARK(BM_VlcLosGain);

void BM_RssVector81(benchmark::State& state) {
    ChannelParams params;
    auto anchors = grid_led_layout({10.0, 10.0, 3.0}, 1.0);
    ReceiverPose pose{{4.2, 6.1, 1.0}, {0.0, 0.0}};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        RngStream rng(seed++);
        benchmark::DoNotOptimize(rss_vector(pose, anchors, params, rng));
    }
    state.SetItemsProcessed(state.iterations() * anchors.size());
}
BENCHMARK(BM_RssVector81);

void BM_GenerateRun(benchmark::State& state) {
    Scenario s = desk_scenario();
    int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_run(s, 0, threads));
    }
    state.SetItemsProcessed(state.iterations() * 33 * 33);
}
BENCHMARK(BM_GenerateRun)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_KnnQuery(benchmark::State& state) {
    Scenario s = desk_scenario();
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec spec;
    EstimatorModel model = fit(spec, train, 1);
    std::size_t r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.predict(std::span<const double>(
            train.features.row(r), train.n_features())));
        r = (r + 1) % train.rows();
    }
}
BENCHMARK(BM_KnnQuery);

void BM_KnnFit(benchmark::State& state) {
    Scenario s = desk_scenario();
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec spec;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(spec, train, 1));
    }
    state.SetItemsProcessed(state.iterations() * train.rows());
}
BENCHMARK(BM_KnnFit)->Unit(benchmark::kMillisecond);

void BM_MlpEpoch(benchmark::State& state) {
    Scenario s = desk_scenario();
    FingerprintDataset train = generate_run(s, 0);
    EstimatorSpec spec;
    spec.kind = EstimatorKind::Mlp;
    spec.mlp.epochs = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(spec, train, 1));
    }
    state.SetItemsProcessed(state.iterations() * train.rows());
}
BENCHMARK(BM_MlpEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
