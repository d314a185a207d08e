#include "vlcloc/estimator.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace vlcloc {

using nlohmann::json;

std::string estimator_kind_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::Knn: return "knn";
        case EstimatorKind::Mlp: return "mlp";
        case EstimatorKind::Svr: return "svr";
        case EstimatorKind::ClassicVlc: return "classic-vlc";
        case EstimatorKind::ClassicRf: return "classic-rf";
    }
    throw std::logic_error("unknown estimator kind");
}

EstimatorKind estimator_kind_from_name(const std::string& name) {
    if (name == "knn") return EstimatorKind::Knn;
    if (name == "mlp") return EstimatorKind::Mlp;
    if (name == "svr") return EstimatorKind::Svr;
    if (name == "classic-vlc") return EstimatorKind::ClassicVlc;
    if (name == "classic-rf") return EstimatorKind::ClassicRf;
    throw std::invalid_argument("unknown estimator kind: " + name);
}

void EstimatorSpec::validate() const {
    if (knn.k < 1) throw std::invalid_argument("knn k must be >= 1");
    for (int h : mlp.hidden) {
        if (h < 1) throw std::invalid_argument("mlp layer sizes must be >= 1");
    }
    if (mlp.epochs < 1 || mlp.batch < 1 || !(mlp.learning_rate > 0.0)) {
        throw std::invalid_argument("invalid mlp hyperparameters");
    }
    if (!(svr.c > 0.0) || svr.epsilon < 0.0 || svr.gamma < 0.0) {
        throw std::invalid_argument("invalid svr hyperparameters");
    }
}

json EstimatorSpec::to_json() const {
    return {{"kind", estimator_kind_name(kind)},
            {"scaling", scaling == Scaling::ZScore ? "z-score" : "none"},
            {"linear_features", linear_features},
            {"knn", {{"k", knn.k}}},
            {"mlp",
             {{"hidden", mlp.hidden},
              {"epochs", mlp.epochs},
              {"batch", mlp.batch},
              {"learning_rate", mlp.learning_rate},
              {"momentum", mlp.momentum}}},
            {"svr",
             {{"c", svr.c},
              {"epsilon", svr.epsilon},
              {"gamma", svr.gamma},
              {"tol", svr.tol},
              {"max_rows", svr.max_rows},
              {"max_iterations", svr.max_iterations}}}};
}

EstimatorSpec EstimatorSpec::from_json(const json& j) {
    EstimatorSpec spec;
    spec.kind = estimator_kind_from_name(j.at("kind").get<std::string>());
    spec.scaling = j.value("scaling", std::string("z-score")) == "none"
                       ? Scaling::None
                       : Scaling::ZScore;
    spec.linear_features = j.value("linear_features", false);
    if (j.contains("knn")) spec.knn.k = j["knn"].value("k", 3);
    if (j.contains("mlp")) {
        const auto& m = j["mlp"];
        spec.mlp.hidden = m.value("hidden", std::vector<int>{64, 64});
        spec.mlp.epochs = m.value("epochs", 200);
        spec.mlp.batch = m.value("batch", 256);
        spec.mlp.learning_rate = m.value("learning_rate", 1e-3);
        spec.mlp.momentum = m.value("momentum", 0.9);
    }
    if (j.contains("svr")) {
        const auto& s = j["svr"];
        spec.svr.c = s.value("c", 10.0);
        spec.svr.epsilon = s.value("epsilon", 0.05);
        spec.svr.gamma = s.value("gamma", 0.0);
        spec.svr.tol = s.value("tol", 1e-3);
        spec.svr.max_rows = s.value("max_rows", std::size_t{5000});
        spec.svr.max_iterations = s.value("max_iterations", long{0});
    }
    spec.validate();
    return spec;
}

namespace {

bool is_classic(EstimatorKind kind) {
    return kind == EstimatorKind::ClassicVlc || kind == EstimatorKind::ClassicRf;
}

// Optional dBm -> linear milliwatt feature transform, applied before the
// scaler on both training and query features.
void to_linear(std::vector<double>& row) {
    for (double& v : row) v = std::pow(10.0, v / 10.0);
}

Matrix prepare_features(const Matrix& raw, bool linear) {
    if (!linear) return raw;
    Matrix out = raw;
    for (double& v : out.data) v = std::pow(10.0, v / 10.0);
    return out;
}

}  // namespace

std::size_t EstimatorModel::n_features() const {
    return is_classic(spec.kind) ? manifest.anchors.size()
                                 : scaler.n_features();
}

std::pair<double, double> EstimatorModel::predict(
    std::span<const double> features) const {
    if (features.size() != n_features()) {
        throw std::invalid_argument("feature arity mismatch");
    }
    if (is_classic(spec.kind)) {
        ClassicResult res = classic_locate(features, manifest);
        return {res.x, res.y};
    }
    std::vector<double> work(features.begin(), features.end());
    if (spec.linear_features) to_linear(work);
    std::vector<double> scaled(work.size());
    scaler.transform_row(work.data(), scaled.data());
    return {axis_x->predict(scaled), axis_y->predict(scaled)};
}

EstimatorModel fit(const EstimatorSpec& spec, const FingerprintDataset& train,
                   std::uint64_t seed, FitDiagnostics* diag) {
    spec.validate();
    if (train.rows() == 0) {
        throw std::invalid_argument("training set is empty");
    }
    EstimatorModel model;
    model.spec = spec;
    model.manifest = train.manifest;
    model.train_rows = train.rows();
    model.seed = seed;
    if (diag) diag->rows_used = train.rows();

    if (is_classic(spec.kind)) {
        if (train.manifest.anchors.empty()) {
            throw std::invalid_argument(
                "classic baseline needs an anchor manifest");
        }
        return model;
    }

    const FingerprintDataset* effective = &train;
    FingerprintDataset reduced;
    if (spec.kind == EstimatorKind::Svr && train.rows() > spec.svr.max_rows) {
        reduced = subsample(train, spec.svr.max_rows, derive_seed(seed, 3, 0));
        effective = &reduced;
        if (diag) {
            diag->subsampled = true;
            diag->rows_used = reduced.rows();
        }
    }
    model.train_rows = effective->rows();

    Matrix prepared = prepare_features(effective->features, spec.linear_features);
    model.scaler = FeatureScaler::fit(prepared, spec.scaling);
    Matrix scaled = model.scaler.transform(prepared);

    std::vector<double> tx(effective->rows()), ty(effective->rows());
    for (std::size_t r = 0; r < effective->rows(); ++r) {
        tx[r] = effective->targets(r, 0);
        ty[r] = effective->targets(r, 1);
    }

    switch (spec.kind) {
        case EstimatorKind::Knn: {
            auto shared = std::make_shared<Matrix>(std::move(scaled));
            int k = std::min<int>(spec.knn.k,
                                  static_cast<int>(effective->rows()));
            model.axis_x = std::make_unique<KnnRegressor>(shared, std::move(tx), k);
            model.axis_y = std::make_unique<KnnRegressor>(shared, std::move(ty), k);
            break;
        }
        case EstimatorKind::Mlp: {
            model.axis_x = MlpRegressor::fit(scaled, tx, spec.mlp,
                                             derive_seed(seed, 1, 0),
                                             diag ? &diag->mlp_x : nullptr);
            model.axis_y = MlpRegressor::fit(scaled, ty, spec.mlp,
                                             derive_seed(seed, 2, 0),
                                             diag ? &diag->mlp_y : nullptr);
            break;
        }
        case EstimatorKind::Svr: {
            model.axis_x = SvrRegressor::fit(scaled, tx, spec.svr,
                                             diag ? &diag->svr_x : nullptr);
            model.axis_y = SvrRegressor::fit(scaled, ty, spec.svr,
                                             diag ? &diag->svr_y : nullptr);
            break;
        }
        default:
            throw std::logic_error("unreachable estimator kind");
    }
    return model;
}

std::vector<std::pair<std::size_t, double>> knn_neighbors(
    const EstimatorModel& model, std::span<const double> features, int k) {
    const auto* knn = dynamic_cast<const KnnRegressor*>(model.axis_x.get());
    if (!knn) throw std::invalid_argument("model is not a KNN model");
    if (features.size() != model.scaler.n_features()) {
        throw std::invalid_argument("feature arity mismatch");
    }
    std::vector<double> work(features.begin(), features.end());
    if (model.spec.linear_features) to_linear(work);
    std::vector<double> scaled(work.size());
    model.scaler.transform_row(work.data(), scaled.data());
    return knn->neighbors(scaled, k);
}

namespace {

json manifest_to_json(const AnchorManifest& m) {
    json anchors = json::array();
    for (const Anchor& a : m.anchors) {
        anchors.push_back({{"x", a.position.x},
                           {"y", a.position.y},
                           {"z", a.position.z},
                           {"kind", a.kind == AnchorKind::VlcLed ? "vlc-led"
                                                                 : "rf-ap"},
                           {"index", a.index}});
    }
    return {{"anchors", anchors},
            {"rx_height", m.rx_height},
            {"scenario_hash", m.scenario_hash},
            {"vlc_emitter",
             {{"tx_power_w", m.channel.vlc_emitter.tx_power},
              {"half_power_semi_angle_rad",
               m.channel.vlc_emitter.half_power_semi_angle}}},
            {"vlc_receiver",
             {{"detector_area_m2", m.channel.vlc_receiver.detector_area},
              {"fov_rad", m.channel.vlc_receiver.fov},
              {"filter_gain", m.channel.vlc_receiver.filter_gain},
              {"concentrator_index", m.channel.vlc_receiver.concentrator_index}}},
            {"rf",
             {{"tx_power_dbm", m.channel.rf.tx_power},
              {"ref_distance_m", m.channel.rf.ref_distance},
              {"ref_loss_db", m.channel.rf.ref_loss},
              {"path_loss_exponent", m.channel.rf.path_loss_exponent},
              {"shadowing_sigma_db", m.channel.rf.shadowing_sigma}}},
            {"noise",
             {{"vlc_relative_sigma", m.channel.noise.vlc_relative_sigma},
              {"rss_floor_dbm", m.channel.noise.rss_floor}}}};
}

AnchorManifest manifest_from_json(const json& j) {
    AnchorManifest m;
    for (const auto& a : j.at("anchors")) {
        m.anchors.push_back({{a.at("x").get<double>(), a.at("y").get<double>(),
                              a.at("z").get<double>()},
                             a.at("kind").get<std::string>() == "vlc-led"
                                 ? AnchorKind::VlcLed
                                 : AnchorKind::RfAp,
                             a.at("index").get<std::uint32_t>()});
    }
    m.rx_height = j.at("rx_height").get<double>();
    m.scenario_hash = j.value("scenario_hash", std::string());
    const auto& e = j.at("vlc_emitter");
    m.channel.vlc_emitter.tx_power = e.at("tx_power_w").get<double>();
    m.channel.vlc_emitter.half_power_semi_angle =
        e.at("half_power_semi_angle_rad").get<double>();
    const auto& r = j.at("vlc_receiver");
    m.channel.vlc_receiver.detector_area = r.at("detector_area_m2").get<double>();
    m.channel.vlc_receiver.fov = r.at("fov_rad").get<double>();
    m.channel.vlc_receiver.filter_gain = r.at("filter_gain").get<double>();
    m.channel.vlc_receiver.concentrator_index =
        r.at("concentrator_index").get<double>();
    const auto& f = j.at("rf");
    m.channel.rf.tx_power = f.at("tx_power_dbm").get<double>();
    m.channel.rf.ref_distance = f.at("ref_distance_m").get<double>();
    m.channel.rf.ref_loss = f.at("ref_loss_db").get<double>();
    m.channel.rf.path_loss_exponent = f.at("path_loss_exponent").get<double>();
    m.channel.rf.shadowing_sigma = f.at("shadowing_sigma_db").get<double>();
    const auto& n = j.at("noise");
    m.channel.noise.vlc_relative_sigma = n.at("vlc_relative_sigma").get<double>();
    m.channel.noise.rss_floor = n.at("rss_floor_dbm").get<double>();
    return m;
}

std::unique_ptr<AxisRegressor> regressor_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "knn") return KnnRegressor::from_json(j.at("data"));
    if (kind == "mlp") return MlpRegressor::from_json(j.at("data"));
    if (kind == "svr") return SvrRegressor::from_json(j.at("data"));
    throw std::invalid_argument("unknown regressor kind: " + kind);
}

}  // namespace

json model_axis_to_json(const EstimatorModel& model, char axis) {
    json j;
    j["schema_version"] = 1;
    j["spec"] = model.spec.to_json();
    j["train_rows"] = model.train_rows;
    j["seed"] = model.seed;
    if (is_classic(model.spec.kind)) {
        j["axis"] = "both";
        j["manifest"] = manifest_to_json(model.manifest);
        return j;
    }
    j["axis"] = std::string(1, axis);
    j["scaler"] = {{"mean", model.scaler.mean()},
                   {"scale", model.scaler.scale()}};
    const AxisRegressor* reg =
        axis == 'x' ? model.axis_x.get() : model.axis_y.get();
    j["regressor"] = {{"kind", reg->kind()}, {"data", reg->to_json()}};
    return j;
}

void save_model(const EstimatorModel& model, const std::string& dir,
                const std::string& name, std::vector<std::string>* paths) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto write = [&](const std::string& file, const json& doc) {
        std::ofstream out(file);
        if (!out) throw std::runtime_error("cannot write model file: " + file);
        out << doc.dump(2) << "\n";
        if (paths) paths->push_back(file);
    };
    if (is_classic(model.spec.kind)) {
        write((fs::path(dir) / (name + ".json")).string(),
              model_axis_to_json(model, 'x'));
        return;
    }
    write((fs::path(dir) / (name + "_x.json")).string(),
          model_axis_to_json(model, 'x'));
    write((fs::path(dir) / (name + "_y.json")).string(),
          model_axis_to_json(model, 'y'));
}

EstimatorModel load_model(const std::vector<std::string>& paths) {
    if (paths.empty() || paths.size() > 2) {
        throw std::invalid_argument("expected one or two model files");
    }
    std::vector<json> docs;
    for (const std::string& p : paths) {
        std::ifstream in(p);
        if (!in) throw std::runtime_error("cannot open model file: " + p);
        docs.push_back(json::parse(in));
    }
    EstimatorModel model;
    model.spec = EstimatorSpec::from_json(docs[0].at("spec"));
    model.train_rows = docs[0].value("train_rows", std::size_t{0});
    model.seed = docs[0].value("seed", std::uint64_t{0});
    if (is_classic(model.spec.kind)) {
        if (docs.size() != 1) {
            throw std::invalid_argument("classic model uses a single file");
        }
        model.manifest = manifest_from_json(docs[0].at("manifest"));
        return model;
    }
    if (docs.size() != 2) {
        throw std::invalid_argument("per-axis model needs two files (x, y)");
    }
    const json* jx = nullptr;
    const json* jy = nullptr;
    for (const json& d : docs) {
        std::string axis = d.at("axis").get<std::string>();
        if (axis == "x") jx = &d;
        if (axis == "y") jy = &d;
    }
    if (!jx || !jy) {
        throw std::invalid_argument("model files must cover axes x and y");
    }
    model.scaler = FeatureScaler(
        jx->at("scaler").at("mean").get<std::vector<double>>(),
        jx->at("scaler").at("scale").get<std::vector<double>>());
    model.axis_x = regressor_from_json(jx->at("regressor"));
    model.axis_y = regressor_from_json(jy->at("regressor"));
    return model;
}

}  // namespace vlcloc
