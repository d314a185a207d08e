#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <stdexcept>

#include "doctest.h"
#include "vlcloc/dataset.hpp"

using namespace vlcloc;
namespace fs = std::filesystem;

namespace {

Scenario tiny_scenario() {
    Scenario s;
    s.name = "tiny";
    s.layout.kind = AnchorLayoutKind::GridLed;
    s.layout.led_spacing = 2.0;  // 4x4 = 16 LEDs
    s.grid.spacing = 1.0;        // 9x9 = 81 receivers
    s.n_runs = 2;
    s.base_seed = 314;
    return s;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("vlcloc_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generate_run has the expected shape and metadata") {
    Scenario s = tiny_scenario();
    FingerprintDataset ds = generate_run(s, 0);
    CHECK(ds.rows() == 81);
    CHECK(ds.n_features() == 16);
    CHECK(ds.targets.cols == 2);
    CHECK(ds.meta.size() == 81);
    CHECK(ds.meta.front().run_id == 0);
    CHECK(ds.meta.front().rx_index == 0);
    CHECK(ds.meta.back().rx_index == 80);
    CHECK(ds.manifest.anchors.size() == 16);
    CHECK(ds.manifest.scenario_hash == scenario_hash(s));
    ds.validate(&s.room);
}

TEST_CASE("rows are independent of thread count and run order") {
    Scenario s = tiny_scenario();
    FingerprintDataset serial = generate_run(s, 1, 1);
    FingerprintDataset threaded = generate_run(s, 1, 4);
    CHECK(serial.features == threaded.features);
    CHECK(serial.targets == threaded.targets);

    // Generating run 1 alone matches its slice inside the campaign.
    FingerprintDataset all = generate_campaign(s, 4);
    REQUIRE(all.rows() == 162);
    for (std::size_t r = 0; r < 81; ++r) {
        for (std::size_t c = 0; c < 16; ++c) {
            CHECK(all.features(81 + r, c) == serial.features(r, c));
        }
    }
}

TEST_CASE("different runs differ") {
    Scenario s = tiny_scenario();
    FingerprintDataset a = generate_run(s, 0);
    FingerprintDataset b = generate_run(s, 1);
    CHECK(a.features != b.features);
    // But targets (grid positions) coincide.
    CHECK(a.targets == b.targets);
}

TEST_CASE("CSV round-trip is bit-exact through 12 significant digits") {
    Scenario s = tiny_scenario();
    FingerprintDataset ds = generate_run(s, 0);
    TempDir tmp;
    std::string path = (tmp.path / "run0.csv").string();
    save_csv(ds, path);
    CHECK(fs::exists(manifest_path_for(path)));

    FingerprintDataset back = load_csv(path);
    REQUIRE(back.rows() == ds.rows());
    REQUIRE(back.n_features() == ds.n_features());
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        CHECK(back.meta[r].run_id == ds.meta[r].run_id);
        CHECK(back.meta[r].rx_index == ds.meta[r].rx_index);
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            CHECK(back.features(r, c) ==
                  doctest::Approx(ds.features(r, c)).epsilon(1e-11));
        }
        CHECK(back.targets(r, 0) == doctest::Approx(ds.targets(r, 0)));
        CHECK(back.targets(r, 1) == doctest::Approx(ds.targets(r, 1)));
    }
    CHECK(back.manifest.anchors.size() == 16);
    CHECK(back.manifest.scenario_hash == ds.manifest.scenario_hash);
}

TEST_CASE("CSV header is the documented layout") {
    Scenario s = tiny_scenario();
    FingerprintDataset ds = generate_run(s, 0);
    TempDir tmp;
    std::string path = (tmp.path / "hdr.csv").string();
    save_csv(ds, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("run_id,rx_index,x,y,z,tilt,azimuth,rss_0,", 0) == 0);
    CHECK(header.find("rss_15") != std::string::npos);
    CHECK(header.find("rss_16") == std::string::npos);
}

TEST_CASE("loader rejects malformed files with a named column") {
    TempDir tmp;
    std::string bad = (tmp.path / "bad.csv").string();
    {
        std::ofstream out(bad);
        out << "run_id,rx_index,x,y,z,azimuth,rss_0\n";
    }
    CHECK_THROWS_WITH_AS(load_csv(bad), doctest::Contains("tilt"),
                         std::runtime_error);

    std::string ragged = (tmp.path / "ragged.csv").string();
    {
        std::ofstream out(ragged);
        out << "run_id,rx_index,x,y,z,tilt,azimuth,rss_0\n";
        out << "0,0,1.0,1.0,1.0,0.0\n";  // too few fields
    }
    CHECK_THROWS_AS(load_csv(ragged), std::runtime_error);

    std::string empty = (tmp.path / "empty.csv").string();
    { std::ofstream out(empty); }
    CHECK_THROWS_AS(load_csv(empty), std::runtime_error);
    CHECK_THROWS_AS(load_csv((tmp.path / "missing.csv").string()),
                    std::runtime_error);
}

TEST_CASE("save_csv then load_csv preserves byte-identical re-save") {
    Scenario s = tiny_scenario();
    FingerprintDataset ds = generate_run(s, 0);
    TempDir tmp;
    std::string p1 = (tmp.path / "a.csv").string();
    std::string p2 = (tmp.path / "b.csv").string();
    save_csv(ds, p1);
    save_csv(load_csv(p1), p2);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
}

TEST_CASE("subsample is deterministic, ordered and caps the row count") {
    Scenario s = tiny_scenario();
    FingerprintDataset ds = generate_campaign(s);
    FingerprintDataset small = subsample(ds, 40, 9);
    CHECK(small.rows() == 40);
    CHECK(small.n_features() == ds.n_features());
    FingerprintDataset again = subsample(ds, 40, 9);
    CHECK(small.features == again.features);
    CHECK(subsample(ds, 40, 10).features != small.features);

    // Identity when the cap exceeds the dataset.
    FingerprintDataset full = subsample(ds, 10000, 9);
    CHECK(full.features == ds.features);

    // Rows keep their original relative order: rx_index within a run
    // is non-decreasing whenever run_id repeats.
    for (std::size_t i = 1; i < small.meta.size(); ++i) {
        if (small.meta[i].run_id == small.meta[i - 1].run_id) {
            CHECK(small.meta[i].rx_index > small.meta[i - 1].rx_index);
        }
    }
}

TEST_CASE("validate catches inconsistent shapes") {
    Scenario s = tiny_scenario();
    FingerprintDataset ds = generate_run(s, 0);
    ds.meta.pop_back();
    CHECK_THROWS_AS(ds.validate(), std::invalid_argument);
}
