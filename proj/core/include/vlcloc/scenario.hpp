#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlcloc/channel.hpp"
#include "vlcloc/geometry.hpp"

namespace vlcloc {

enum class AnchorLayoutKind { GridLed, CornerAp, Explicit };

struct AnchorLayoutSpec {
    AnchorLayoutKind kind = AnchorLayoutKind::GridLed;
    double led_spacing = 1.0;            // GridLed
    double wall_margin = 2.5;            // CornerAp
    AnchorKind corner_kind = AnchorKind::RfAp;  // CornerAp: LED or AP corners
    std::vector<Anchor> anchors;         // Explicit
};

struct ReceiverGridSpec {
    double spacing = 0.1;  // meters
    double height = 1.0;   // meters above the floor
};

/// The single source of truth for a fingerprint campaign.
struct Scenario {
    std::string name = "scenario";
    RoomConfig room;
    AnchorLayoutSpec layout;
    ChannelParams channel;
    ReceiverGridSpec grid;
    OrientationConfig orientation;
    int n_runs = 50;
    std::uint64_t base_seed = 1;

    void validate() const;
    std::vector<Anchor> build_anchors() const;
    std::vector<Vec3> build_grid() const;
};

Scenario scenario_from_json(const std::string& text);
std::string scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// Stable content hash of the canonical JSON form, hex-encoded.
std::string scenario_hash(const Scenario& s);

}  // namespace vlcloc
