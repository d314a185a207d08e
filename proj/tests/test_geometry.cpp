#include <cmath>
#include <set>

#include <stdexcept>

#include "doctest.h"
#include "vlcloc/geometry.hpp"

using namespace vlcloc;

namespace {
const RoomConfig kRefRoom{10.0, 10.0, 3.0};
}

TEST_CASE("LED grid for the 10x10 room at 1 m spacing has 81 anchors") {
    auto anchors = grid_led_layout(kRefRoom, 1.0);
    REQUIRE(anchors.size() == 81);
    std::set<double> xs, ys;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const Anchor& a = anchors[i];
        CHECK(a.index == i);
        CHECK(a.kind == AnchorKind::VlcLed);
        CHECK(a.position.z == 3.0);
        CHECK(a.position.x > 0.0);
        CHECK(a.position.x < 10.0);
        CHECK(a.position.y > 0.0);
        CHECK(a.position.y < 10.0);
        xs.insert(a.position.x);
        ys.insert(a.position.y);
    }
    CHECK(xs == std::set<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(ys == std::set<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
    // Row-major: x varies fastest.
    CHECK(anchors[0].position.x == 1.0);
    CHECK(anchors[1].position.x == 2.0);
    CHECK(anchors[0].position.y == anchors[1].position.y);
}

TEST_CASE("LED grid on a tiny room") {
    auto anchors = grid_led_layout({3.0, 3.0, 3.0}, 1.0);
    REQUIRE(anchors.size() == 4);
    CHECK(anchors[0].position.x == 1.0);
    CHECK(anchors[3].position.x == 2.0);
    CHECK(anchors[3].position.y == 2.0);
}

TEST_CASE("LED grid rejects degenerate spacing") {
    CHECK_THROWS_AS(grid_led_layout(kRefRoom, 11.0), std::invalid_argument);
    CHECK_THROWS_AS(grid_led_layout(kRefRoom, 0.0), std::invalid_argument);
}

TEST_CASE("corner layout at 2.5 m margin") {
    auto anchors = corner_ap_layout(kRefRoom, 2.5);
    REQUIRE(anchors.size() == 4);
    CHECK(anchors[0].position.x == 2.5);
    CHECK(anchors[0].position.y == 2.5);
    CHECK(anchors[3].position.x == 7.5);
    CHECK(anchors[3].position.y == 7.5);
    // Pairwise nearest distance is 5 m.
    double best = 1e9;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            best = std::min(best,
                            (anchors[i].position - anchors[j].position).norm());
        }
    }
    CHECK(best == doctest::Approx(5.0));
}

TEST_CASE("corner layout error and small-room case") {
    CHECK_THROWS_AS(corner_ap_layout(kRefRoom, 5.0), std::invalid_argument);
    auto anchors = corner_ap_layout({4.0, 4.0, 3.0}, 1.0);
    CHECK(anchors[1].position.y == 3.0);
    CHECK(anchors[2].position.x == 3.0);
}

TEST_CASE("receiver grid covers the room as a 99x99 lattice") {
    auto grid = receiver_grid(kRefRoom, 0.1, 1.0);
    REQUIRE(grid.size() == 9801);
    CHECK(grid.front().x == doctest::Approx(0.1));
    CHECK(grid.front().y == doctest::Approx(0.1));
    CHECK(grid.back().x == doctest::Approx(9.9));
    CHECK(grid.back().y == doctest::Approx(9.9));
    for (const Vec3& p : grid) CHECK(p.z == 1.0);
}

TEST_CASE("receiver grid edge cases") {
    auto single = receiver_grid(kRefRoom, 5.0, 1.0);
    REQUIRE(single.size() == 1);
    CHECK(single[0].x == 5.0);
    CHECK(single[0].y == 5.0);
    CHECK_THROWS_AS(receiver_grid(kRefRoom, 0.1, 3.5), std::invalid_argument);
}

TEST_CASE("layouts are bit-reproducible") {
    CHECK(grid_led_layout(kRefRoom, 1.0)[40].position.x ==
          grid_led_layout(kRefRoom, 1.0)[40].position.x);
    auto a = receiver_grid(kRefRoom, 0.1, 1.0);
    auto b = receiver_grid(kRefRoom, 0.1, 1.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].y == b[i].y);
    }
}

TEST_CASE("orientation sampling is deterministic and within range") {
    RngStream a(0), b(0);
    OrientationConfig cfg;
    for (int i = 0; i < 100; ++i) {
        Orientation oa = sample_orientation(a, cfg);
        Orientation ob = sample_orientation(b, cfg);
        CHECK(oa.tilt == ob.tilt);
        CHECK(oa.azimuth == ob.azimuth);
    }

    RngStream rng(123);
    for (int i = 0; i < 100000; ++i) {
        Orientation o = sample_orientation(rng, cfg);
        REQUIRE(o.tilt >= 0.0);
        REQUIRE(o.tilt <= M_PI / 3.0);
        REQUIRE(o.azimuth >= 0.0);
        REQUIRE(o.azimuth < 2.0 * M_PI);
    }
}

TEST_CASE("strict azimuth mode keeps the fixed tilt") {
    OrientationConfig cfg;
    cfg.mode = OrientationMode::StrictAzimuth;
    cfg.fixed_tilt = 0.2;
    RngStream rng(5);
    for (int i = 0; i < 1000; ++i) {
        Orientation o = sample_orientation(rng, cfg);
        CHECK(o.tilt == 0.2);
        REQUIRE(o.azimuth >= 0.0);
        REQUIRE(o.azimuth < 2.0 * M_PI);
    }
}

TEST_CASE("normal vector closed forms") {
    Vec3 up = normal_vector({0.0, 1.234});
    CHECK(up.x == doctest::Approx(0.0));
    CHECK(up.y == doctest::Approx(0.0));
    CHECK(up.z == doctest::Approx(1.0));

    Vec3 tilted = normal_vector({M_PI / 3.0, 0.0});
    CHECK(tilted.x == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(tilted.y == doctest::Approx(0.0));
    CHECK(tilted.z == doctest::Approx(0.5));
}

TEST_CASE("normal vector has unit norm for random orientations") {
    RngStream rng(99);
    for (int i = 0; i < 1000; ++i) {
        Orientation o = sample_orientation(rng);
        CHECK(std::fabs(normal_vector(o).norm() - 1.0) < 1e-12);
    }
}
