#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vlcloc/rng.hpp"

namespace vlcloc {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

/// Room dimensions in meters; the origin is a floor corner, z points up.
struct RoomConfig {
    double width = 10.0;   // x extent
    double length = 10.0;  // y extent
    double height = 3.0;   // z extent

    void validate() const;
};

enum class AnchorKind { VlcLed, RfAp };

/// A fixed ceiling transmitter with a known position.
struct Anchor {
    Vec3 position;
    AnchorKind kind = AnchorKind::VlcLed;
    std::uint32_t index = 0;
};

/// Receiver attitude: tilt is the polar angle of the detector normal from
/// vertical, azimuth the rotation of the tilt plane about vertical.
struct Orientation {
    double tilt = 0.0;     // [0, pi/2)
    double azimuth = 0.0;  // [0, 2*pi)
};

struct ReceiverPose {
    Vec3 position;
    Orientation orientation;
};

enum class OrientationMode {
    /// Draw an angle uniformly in [-max_angle, max_angle], use its magnitude
    /// as the tilt, and fold its sign into a uniformly random azimuth.
    RandomTilt,
    /// Keep a fixed tilt, draw only the azimuth from [-max_angle, max_angle].
    StrictAzimuth,
};

struct OrientationConfig {
    OrientationMode mode = OrientationMode::RandomTilt;
    double max_angle = M_PI / 3.0;  // radians
    double fixed_tilt = 0.0;        // used only in StrictAzimuth mode
};

/// Interior grid of ceiling LEDs at multiples of `spacing`, no anchors on
/// the walls; row-major (x fastest). 10x10 room at 1 m spacing gives 81.
std::vector<Anchor> grid_led_layout(const RoomConfig& room, double spacing);

/// Four ceiling anchors inset `wall_margin` from each wall.
std::vector<Anchor> corner_ap_layout(const RoomConfig& room, double wall_margin,
                                     AnchorKind kind = AnchorKind::RfAp);

/// Interior receiver grid at height `rx_height`, row-major (x fastest).
std::vector<Vec3> receiver_grid(const RoomConfig& room, double spacing,
                                double rx_height);

Orientation sample_orientation(RngStream& rng,
                               const OrientationConfig& cfg = {});

/// Unit detector normal for an orientation.
Vec3 normal_vector(const Orientation& o);

}  // namespace vlcloc
