#include "vlcloc/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vlcloc {

void RoomConfig::validate() const {
    if (!(width > 0.0) || !(length > 0.0) || !(height > 0.0)) {
        throw std::invalid_argument("room dimensions must be positive");
    }
}

namespace {

// Number of interior grid lines: i = 1 .. ceil(extent/spacing)-1.
int interior_count(double extent, double spacing) {
    return static_cast<int>(std::ceil(extent / spacing)) - 1;
}

}  // namespace

std::vector<Anchor> grid_led_layout(const RoomConfig& room, double spacing) {
    room.validate();
    if (!(spacing > 0.0) || spacing >= std::min(room.width, room.length)) {
        throw std::invalid_argument("LED spacing must be in (0, min(width, length))");
    }
    int nx = interior_count(room.width, spacing);
    int ny = interior_count(room.length, spacing);
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("LED spacing yields an empty layout");
    }
    std::vector<Anchor> anchors;
    anchors.reserve(static_cast<std::size_t>(nx) * ny);
    std::uint32_t idx = 0;
    for (int j = 1; j <= ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
            anchors.push_back({{i * spacing, j * spacing, room.height},
                               AnchorKind::VlcLed, idx++});
        }
    }
    return anchors;
}

std::vector<Anchor> corner_ap_layout(const RoomConfig& room, double wall_margin,
                                     AnchorKind kind) {
    room.validate();
    double half_min = std::min(room.width, room.length) / 2.0;
    if (!(wall_margin > 0.0) || wall_margin >= half_min) {
        throw std::invalid_argument("wall margin must be in (0, min(width, length)/2)");
    }
    double m = wall_margin;
    double w = room.width, l = room.length, h = room.height;
    return {
        {{m, m, h}, kind, 0},
        {{m, l - m, h}, kind, 1},
        {{w - m, m, h}, kind, 2},
        {{w - m, l - m, h}, kind, 3},
    };
}

std::vector<Vec3> receiver_grid(const RoomConfig& room, double spacing,
                                double rx_height) {
    room.validate();
    if (!(spacing > 0.0)) {
        throw std::invalid_argument("receiver spacing must be positive");
    }
    if (!(rx_height > 0.0) || rx_height >= room.height) {
        throw std::invalid_argument("receiver height must be in (0, room height)");
    }
    int nx = interior_count(room.width, spacing);
    int ny = interior_count(room.length, spacing);
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("receiver spacing yields an empty grid");
    }
    std::vector<Vec3> grid;
    grid.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 1; j <= ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
            grid.push_back({i * spacing, j * spacing, rx_height});
        }
    }
    return grid;
}

Orientation sample_orientation(RngStream& rng, const OrientationConfig& cfg) {
    constexpr double two_pi = 2.0 * M_PI;
    if (cfg.mode == OrientationMode::StrictAzimuth) {
        double az = rng.uniform(-cfg.max_angle, cfg.max_angle);
        if (az < 0.0) az += two_pi;
        return {cfg.fixed_tilt, az};
    }
    double theta = rng.uniform(-cfg.max_angle, cfg.max_angle);
    double az = rng.uniform(0.0, two_pi);
    if (theta < 0.0) {
        az = std::fmod(az + M_PI, two_pi);
    }
    return {std::fabs(theta), az};
}

Vec3 normal_vector(const Orientation& o) {
    double st = std::sin(o.tilt);
    return {st * std::cos(o.azimuth), st * std::sin(o.azimuth), std::cos(o.tilt)};
}

}  // namespace vlcloc
