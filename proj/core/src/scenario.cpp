#include "vlcloc/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace vlcloc {

using nlohmann::json;

void Scenario::validate() const {
    room.validate();
    channel.vlc_emitter.validate();
    channel.vlc_receiver.validate();
    channel.rf.validate();
    channel.noise.validate();
    if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
    if (!(grid.spacing > 0.0)) {
        throw std::invalid_argument("receiver grid spacing must be positive");
    }
    if (!(grid.height > 0.0) || grid.height >= room.height) {
        throw std::invalid_argument("receiver height must be in (0, room height)");
    }
    if (!(orientation.max_angle >= 0.0) || orientation.max_angle > M_PI / 2.0) {
        throw std::invalid_argument("orientation max angle must be in [0, pi/2]");
    }
}

std::vector<Anchor> Scenario::build_anchors() const {
    switch (layout.kind) {
        case AnchorLayoutKind::GridLed:
            return grid_led_layout(room, layout.led_spacing);
        case AnchorLayoutKind::CornerAp:
            return corner_ap_layout(room, layout.wall_margin, layout.corner_kind);
        case AnchorLayoutKind::Explicit:
            if (layout.anchors.empty()) {
                throw std::invalid_argument("explicit anchor list is empty");
            }
            return layout.anchors;
    }
    throw std::logic_error("unknown anchor layout kind");
}

std::vector<Vec3> Scenario::build_grid() const {
    return receiver_grid(room, grid.spacing, grid.height);
}

namespace {

std::string kind_name(AnchorKind k) {
    return k == AnchorKind::VlcLed ? "vlc-led" : "rf-ap";
}

AnchorKind kind_from_name(const std::string& s) {
    if (s == "vlc-led") return AnchorKind::VlcLed;
    if (s == "rf-ap") return AnchorKind::RfAp;
    throw std::invalid_argument("unknown anchor kind: " + s);
}

json anchors_to_json(const std::vector<Anchor>& anchors) {
    json arr = json::array();
    for (const Anchor& a : anchors) {
        arr.push_back({{"x", a.position.x},
                       {"y", a.position.y},
                       {"z", a.position.z},
                       {"kind", kind_name(a.kind)},
                       {"index", a.index}});
    }
    return arr;
}

std::vector<Anchor> anchors_from_json(const json& arr) {
    std::vector<Anchor> anchors;
    for (const auto& a : arr) {
        anchors.push_back({{a.at("x").get<double>(), a.at("y").get<double>(),
                            a.at("z").get<double>()},
                           kind_from_name(a.at("kind").get<std::string>()),
                           a.at("index").get<std::uint32_t>()});
    }
    return anchors;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["schema_version"] = 1;
    j["name"] = s.name;
    j["room"] = {{"width", s.room.width},
                 {"length", s.room.length},
                 {"height", s.room.height}};
    json layout;
    switch (s.layout.kind) {
        case AnchorLayoutKind::GridLed:
            layout["kind"] = "grid-led";
            layout["led_spacing"] = s.layout.led_spacing;
            break;
        case AnchorLayoutKind::CornerAp:
            layout["kind"] = "corner-ap";
            layout["wall_margin"] = s.layout.wall_margin;
            layout["corner_kind"] = kind_name(s.layout.corner_kind);
            break;
        case AnchorLayoutKind::Explicit:
            layout["kind"] = "explicit";
            layout["anchors"] = anchors_to_json(s.layout.anchors);
            break;
    }
    j["anchor_layout"] = layout;
    j["vlc_emitter"] = {
        {"tx_power_w", s.channel.vlc_emitter.tx_power},
        {"half_power_semi_angle_rad", s.channel.vlc_emitter.half_power_semi_angle}};
    j["vlc_receiver"] = {
        {"detector_area_m2", s.channel.vlc_receiver.detector_area},
        {"fov_rad", s.channel.vlc_receiver.fov},
        {"filter_gain", s.channel.vlc_receiver.filter_gain},
        {"concentrator_index", s.channel.vlc_receiver.concentrator_index}};
    j["rf"] = {{"tx_power_dbm", s.channel.rf.tx_power},
               {"ref_distance_m", s.channel.rf.ref_distance},
               {"ref_loss_db", s.channel.rf.ref_loss},
               {"path_loss_exponent", s.channel.rf.path_loss_exponent},
               {"shadowing_sigma_db", s.channel.rf.shadowing_sigma}};
    j["noise"] = {{"vlc_relative_sigma", s.channel.noise.vlc_relative_sigma},
                  {"rss_floor_dbm", s.channel.noise.rss_floor}};
    j["receiver_grid"] = {{"spacing_m", s.grid.spacing},
                          {"height_m", s.grid.height}};
    j["orientation"] = {
        {"mode", s.orientation.mode == OrientationMode::RandomTilt
                     ? "random-tilt"
                     : "strict-azimuth"},
        {"max_angle_rad", s.orientation.max_angle},
        {"fixed_tilt_rad", s.orientation.fixed_tilt}};
    j["n_runs"] = s.n_runs;
    j["base_seed"] = s.base_seed;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario JSON parse error: ") +
                                    e.what());
    }
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    const auto& room = j.at("room");
    s.room = {room.at("width").get<double>(), room.at("length").get<double>(),
              room.at("height").get<double>()};
    const auto& layout = j.at("anchor_layout");
    std::string lk = layout.at("kind").get<std::string>();
    if (lk == "grid-led") {
        s.layout.kind = AnchorLayoutKind::GridLed;
        s.layout.led_spacing = layout.at("led_spacing").get<double>();
    } else if (lk == "corner-ap") {
        s.layout.kind = AnchorLayoutKind::CornerAp;
        s.layout.wall_margin = layout.at("wall_margin").get<double>();
        s.layout.corner_kind =
            kind_from_name(layout.value("corner_kind", std::string("rf-ap")));
    } else if (lk == "explicit") {
        s.layout.kind = AnchorLayoutKind::Explicit;
        s.layout.anchors = anchors_from_json(layout.at("anchors"));
    } else {
        throw std::invalid_argument("unknown anchor layout kind: " + lk);
    }
    if (j.contains("vlc_emitter")) {
        const auto& e = j["vlc_emitter"];
        s.channel.vlc_emitter.tx_power = e.value("tx_power_w", 1.0);
        s.channel.vlc_emitter.half_power_semi_angle =
            e.value("half_power_semi_angle_rad", M_PI / 3.0);
    }
    if (j.contains("vlc_receiver")) {
        const auto& r = j["vlc_receiver"];
        s.channel.vlc_receiver.detector_area = r.value("detector_area_m2", 1e-4);
        s.channel.vlc_receiver.fov = r.value("fov_rad", 0.7854);
        s.channel.vlc_receiver.filter_gain = r.value("filter_gain", 1.0);
        s.channel.vlc_receiver.concentrator_index =
            r.value("concentrator_index", 1.5);
    }
    if (j.contains("rf")) {
        const auto& r = j["rf"];
        s.channel.rf.tx_power = r.value("tx_power_dbm", 20.0);
        s.channel.rf.ref_distance = r.value("ref_distance_m", 1.0);
        s.channel.rf.ref_loss = r.value("ref_loss_db", 40.0);
        s.channel.rf.path_loss_exponent = r.value("path_loss_exponent", 2.2);
        s.channel.rf.shadowing_sigma = r.value("shadowing_sigma_db", 3.0);
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        s.channel.noise.vlc_relative_sigma = n.value("vlc_relative_sigma", 0.05);
        s.channel.noise.rss_floor = n.value("rss_floor_dbm", -130.0);
    }
    const auto& g = j.at("receiver_grid");
    s.grid.spacing = g.at("spacing_m").get<double>();
    s.grid.height = g.at("height_m").get<double>();
    if (j.contains("orientation")) {
        const auto& o = j["orientation"];
        std::string mode = o.value("mode", std::string("random-tilt"));
        if (mode == "random-tilt") {
            s.orientation.mode = OrientationMode::RandomTilt;
        } else if (mode == "strict-azimuth") {
            s.orientation.mode = OrientationMode::StrictAzimuth;
        } else {
            throw std::invalid_argument("unknown orientation mode: " + mode);
        }
        s.orientation.max_angle = o.value("max_angle_rad", M_PI / 3.0);
        s.orientation.fixed_tilt = o.value("fixed_tilt_rad", 0.0);
    }
    s.n_runs = j.value("n_runs", 1);
    s.base_seed = j.value("base_seed", std::uint64_t{1});
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open scenario file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write scenario file: " + path);
    }
    out << scenario_to_json(s) << "\n";
}

std::string scenario_hash(const Scenario& s) {
    // FNV-1a over the canonical JSON dump.
    std::string text = scenario_to_json(s);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace vlcloc
