#include "vlcloc/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace vlcloc {

using nlohmann::json;

void FingerprintDataset::validate(const RoomConfig* room) const {
    if (features.rows != targets.rows || meta.size() != features.rows) {
        throw std::invalid_argument("dataset row counts disagree");
    }
    if (targets.cols != 2) {
        throw std::invalid_argument("targets must have two columns");
    }
    for (double v : features.data) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature");
    }
    for (std::size_t r = 0; r < targets.rows; ++r) {
        double x = targets(r, 0), y = targets(r, 1);
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw std::invalid_argument("non-finite target");
        }
        if (room && (x < 0.0 || x > room->width || y < 0.0 || y > room->length)) {
            throw std::invalid_argument("target outside room footprint");
        }
    }
}

namespace {

void fill_rows(const Scenario& scenario, const std::vector<Anchor>& anchors,
               const std::vector<Vec3>& grid, std::uint32_t run_id,
               FingerprintDataset& ds, std::size_t row_offset, int threads) {
    const std::size_t n = grid.size();
    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            RngStream rng(derive_seed(scenario.base_seed, run_id, r));
            Orientation o = sample_orientation(rng, scenario.orientation);
            ReceiverPose pose{grid[r], o};
            std::vector<double> rss =
                rss_vector(pose, anchors, scenario.channel, rng);
            std::size_t out = row_offset + r;
            std::copy(rss.begin(), rss.end(), ds.features.row(out));
            ds.targets(out, 0) = grid[r].x;
            ds.targets(out, 1) = grid[r].y;
            ds.meta[out] = {run_id, static_cast<std::uint32_t>(r), o.tilt,
                            o.azimuth};
        }
    };
    if (threads <= 1 || n < 256) {
        worker(0, n);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk;
        if (lo >= n) break;
        pool.emplace_back(worker, lo, std::min(lo + chunk, n));
    }
    for (auto& th : pool) th.join();
}

FingerprintDataset make_empty(const Scenario& scenario,
                              const std::vector<Anchor>& anchors,
                              std::size_t rows) {
    FingerprintDataset ds;
    ds.features = Matrix(rows, anchors.size());
    ds.targets = Matrix(rows, 2);
    ds.meta.resize(rows);
    ds.manifest.anchors = anchors;
    ds.manifest.channel = scenario.channel;
    ds.manifest.rx_height = scenario.grid.height;
    ds.manifest.scenario_hash = scenario_hash(scenario);
    return ds;
}

}  // namespace

FingerprintDataset generate_run(const Scenario& scenario, std::uint32_t run_id,
                                int threads) {
    scenario.validate();
    if (static_cast<int>(run_id) >= scenario.n_runs) {
        throw std::invalid_argument("run_id out of range");
    }
    std::vector<Anchor> anchors = scenario.build_anchors();
    std::vector<Vec3> grid = scenario.build_grid();
    FingerprintDataset ds = make_empty(scenario, anchors, grid.size());
    fill_rows(scenario, anchors, grid, run_id, ds, 0, threads);
    return ds;
}

FingerprintDataset generate_campaign(const Scenario& scenario, int threads) {
    scenario.validate();
    std::vector<Anchor> anchors = scenario.build_anchors();
    std::vector<Vec3> grid = scenario.build_grid();
    std::size_t per_run = grid.size();
    FingerprintDataset ds =
        make_empty(scenario, anchors, per_run * scenario.n_runs);
    for (int run = 0; run < scenario.n_runs; ++run) {
        fill_rows(scenario, anchors, grid, run, ds, per_run * run, threads);
    }
    return ds;
}

std::string manifest_path_for(const std::string& csv_path) {
    std::string base = csv_path;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") {
        base.resize(base.size() - 4);
    }
    return base + ".manifest.json";
}

namespace {

void append_g12(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    out += buf;
}

json channel_to_json(const ChannelParams& c) {
    return {
        {"vlc_emitter",
         {{"tx_power_w", c.vlc_emitter.tx_power},
          {"half_power_semi_angle_rad", c.vlc_emitter.half_power_semi_angle}}},
        {"vlc_receiver",
         {{"detector_area_m2", c.vlc_receiver.detector_area},
          {"fov_rad", c.vlc_receiver.fov},
          {"filter_gain", c.vlc_receiver.filter_gain},
          {"concentrator_index", c.vlc_receiver.concentrator_index}}},
        {"rf",
         {{"tx_power_dbm", c.rf.tx_power},
          {"ref_distance_m", c.rf.ref_distance},
          {"ref_loss_db", c.rf.ref_loss},
          {"path_loss_exponent", c.rf.path_loss_exponent},
          {"shadowing_sigma_db", c.rf.shadowing_sigma}}},
        {"noise",
         {{"vlc_relative_sigma", c.noise.vlc_relative_sigma},
          {"rss_floor_dbm", c.noise.rss_floor}}}};
}

ChannelParams channel_from_json(const json& j) {
    ChannelParams c;
    const auto& e = j.at("vlc_emitter");
    c.vlc_emitter.tx_power = e.at("tx_power_w").get<double>();
    c.vlc_emitter.half_power_semi_angle =
        e.at("half_power_semi_angle_rad").get<double>();
    const auto& r = j.at("vlc_receiver");
    c.vlc_receiver.detector_area = r.at("detector_area_m2").get<double>();
    c.vlc_receiver.fov = r.at("fov_rad").get<double>();
    c.vlc_receiver.filter_gain = r.at("filter_gain").get<double>();
    c.vlc_receiver.concentrator_index =
        r.at("concentrator_index").get<double>();
    const auto& f = j.at("rf");
    c.rf.tx_power = f.at("tx_power_dbm").get<double>();
    c.rf.ref_distance = f.at("ref_distance_m").get<double>();
    c.rf.ref_loss = f.at("ref_loss_db").get<double>();
    c.rf.path_loss_exponent = f.at("path_loss_exponent").get<double>();
    c.rf.shadowing_sigma = f.at("shadowing_sigma_db").get<double>();
    const auto& n = j.at("noise");
    c.noise.vlc_relative_sigma = n.at("vlc_relative_sigma").get<double>();
    c.noise.rss_floor = n.at("rss_floor_dbm").get<double>();
    return c;
}

}  // namespace

void save_csv(const FingerprintDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);

    std::string line = "run_id,rx_index,x,y,z,tilt,azimuth";
    for (std::size_t c = 0; c < ds.n_features(); ++c) {
        line += ",rss_" + std::to_string(c);
    }
    out << line << "\n";
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        line.clear();
        line += std::to_string(ds.meta[r].run_id);
        line += ',';
        line += std::to_string(ds.meta[r].rx_index);
        line += ',';
        append_g12(line, ds.targets(r, 0));
        line += ',';
        append_g12(line, ds.targets(r, 1));
        line += ',';
        append_g12(line, ds.manifest.rx_height);
        line += ',';
        append_g12(line, ds.meta[r].tilt);
        line += ',';
        append_g12(line, ds.meta[r].azimuth);
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            line += ',';
            append_g12(line, ds.features(r, c));
        }
        out << line << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);

    json manifest;
    manifest["schema_version"] = 1;
    json anchors = json::array();
    for (const Anchor& a : ds.manifest.anchors) {
        anchors.push_back({{"x", a.position.x},
                           {"y", a.position.y},
                           {"z", a.position.z},
                           {"kind", a.kind == AnchorKind::VlcLed ? "vlc-led"
                                                                 : "rf-ap"},
                           {"index", a.index}});
    }
    manifest["anchors"] = anchors;
    manifest["channel"] = channel_to_json(ds.manifest.channel);
    manifest["rx_height"] = ds.manifest.rx_height;
    manifest["scenario_hash"] = ds.manifest.scenario_hash;
    std::ofstream mout(manifest_path_for(path));
    if (!mout) throw std::runtime_error("cannot write manifest for " + path);
    mout << manifest.dump(2) << "\n";
}

FingerprintDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string header;
    if (!std::getline(in, header) || header.empty()) {
        throw std::runtime_error("empty dataset file: " + path);
    }
    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string tok;
        while (std::getline(ss, tok, ',')) cols.push_back(tok);
    }
    const char* required[] = {"run_id", "rx_index", "x", "y", "z", "tilt",
                              "azimuth"};
    for (std::size_t i = 0; i < 7; ++i) {
        if (i >= cols.size() || cols[i] != required[i]) {
            throw std::runtime_error(std::string("missing or misplaced column '") +
                                     required[i] + "' in " + path);
        }
    }
    std::size_t n_rss = cols.size() - 7;
    for (std::size_t c = 0; c < n_rss; ++c) {
        if (cols[7 + c] != "rss_" + std::to_string(c)) {
            throw std::runtime_error("missing column 'rss_" + std::to_string(c) +
                                     "' in " + path);
        }
    }
    if (n_rss == 0) {
        throw std::runtime_error("no rss columns in " + path);
    }

    FingerprintDataset ds;
    std::vector<double> feat_buf;
    std::vector<double> tgt_buf;
    std::string line;
    std::size_t line_no = 1;
    double rx_height = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> vals;
        vals.reserve(cols.size());
        const char* p = line.c_str();
        char* end = nullptr;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            vals.push_back(std::strtod(p, &end));
            if (end == p) {
                throw std::runtime_error("malformed value at " + path + ":" +
                                         std::to_string(line_no));
            }
            p = end;
            if (c + 1 < cols.size()) {
                if (*p != ',') {
                    throw std::runtime_error("row arity mismatch at " + path +
                                             ":" + std::to_string(line_no));
                }
                ++p;
            }
        }
        if (*p != '\0' && *p != '\r') {
            throw std::runtime_error("row arity mismatch at " + path + ":" +
                                     std::to_string(line_no));
        }
        ds.meta.push_back({static_cast<std::uint32_t>(vals[0]),
                           static_cast<std::uint32_t>(vals[1]), vals[5],
                           vals[6]});
        tgt_buf.push_back(vals[2]);
        tgt_buf.push_back(vals[3]);
        rx_height = vals[4];
        feat_buf.insert(feat_buf.end(), vals.begin() + 7, vals.end());
    }
    if (ds.meta.empty()) {
        throw std::runtime_error("dataset has no rows: " + path);
    }
    ds.features = Matrix(ds.meta.size(), n_rss);
    ds.features.data = std::move(feat_buf);
    ds.targets = Matrix(ds.meta.size(), 2);
    ds.targets.data = std::move(tgt_buf);
    ds.manifest.rx_height = rx_height;

    std::ifstream min(manifest_path_for(path));
    if (min) {
        json manifest = json::parse(min);
        for (const auto& a : manifest.at("anchors")) {
            ds.manifest.anchors.push_back(
                {{a.at("x").get<double>(), a.at("y").get<double>(),
                  a.at("z").get<double>()},
                 a.at("kind").get<std::string>() == "vlc-led"
                     ? AnchorKind::VlcLed
                     : AnchorKind::RfAp,
                 a.at("index").get<std::uint32_t>()});
        }
        ds.manifest.channel = channel_from_json(manifest.at("channel"));
        ds.manifest.rx_height = manifest.at("rx_height").get<double>();
        ds.manifest.scenario_hash =
            manifest.value("scenario_hash", std::string());
    }
    ds.validate();
    return ds;
}

FingerprintDataset subsample(const FingerprintDataset& ds,
                             std::size_t max_rows, std::uint64_t seed) {
    if (max_rows == 0) throw std::invalid_argument("max_rows must be >= 1");
    if (max_rows >= ds.rows()) return ds;

    // Partial Fisher-Yates, then restore original row order.
    std::vector<std::size_t> idx(ds.rows());
    std::iota(idx.begin(), idx.end(), 0);
    RngStream rng(derive_seed(seed, 0x5B5A11, 0));
    for (std::size_t i = 0; i < max_rows; ++i) {
        std::size_t j = i + rng.next_u64() % (idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(max_rows);
    std::sort(idx.begin(), idx.end());

    FingerprintDataset out;
    out.manifest = ds.manifest;
    out.features = Matrix(max_rows, ds.n_features());
    out.targets = Matrix(max_rows, 2);
    out.meta.reserve(max_rows);
    for (std::size_t i = 0; i < max_rows; ++i) {
        std::size_t r = idx[i];
        std::copy(ds.features.row(r), ds.features.row(r) + ds.n_features(),
                  out.features.row(i));
        out.targets(i, 0) = ds.targets(r, 0);
        out.targets(i, 1) = ds.targets(r, 1);
        out.meta.push_back(ds.meta[r]);
    }
    return out;
}

}  // namespace vlcloc
