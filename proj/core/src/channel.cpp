#include "vlcloc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace vlcloc {

void VlcEmitterParams::validate() const {
    if (!(tx_power > 0.0)) {
        throw std::invalid_argument("VLC tx power must be positive");
    }
    if (!(half_power_semi_angle > 0.0) || !(half_power_semi_angle < M_PI / 2.0)) {
        throw std::invalid_argument("half-power semi-angle must be in (0, pi/2)");
    }
}

void VlcReceiverParams::validate() const {
    if (!(detector_area > 0.0) || !(fov > 0.0) || fov > M_PI / 2.0 ||
        !(filter_gain > 0.0) || concentrator_index < 1.0) {
        throw std::invalid_argument("invalid VLC receiver parameters");
    }
}

double VlcReceiverParams::concentrator_gain() const {
    double s = std::sin(fov);
    return concentrator_index * concentrator_index / (s * s);
}

void RfParams::validate() const {
    if (!(ref_distance > 0.0) || !(path_loss_exponent > 0.0) ||
        shadowing_sigma < 0.0) {
        throw std::invalid_argument("invalid RF parameters");
    }
}

void NoiseConfig::validate() const {
    if (vlc_relative_sigma < 0.0 || !std::isfinite(rss_floor)) {
        throw std::invalid_argument("invalid noise configuration");
    }
}

double lambertian_order(double half_power_semi_angle) {
    if (!(half_power_semi_angle > 0.0) ||
        !(half_power_semi_angle < M_PI / 2.0)) {
        throw std::invalid_argument("half-power semi-angle must be in (0, pi/2)");
    }
    return -std::log(2.0) / std::log(std::cos(half_power_semi_angle));
}

double vlc_los_gain(const Anchor& emitter, const VlcEmitterParams& em,
                    const ReceiverPose& receiver, const VlcReceiverParams& rx) {
    em.validate();
    rx.validate();
    Vec3 delta = emitter.position - receiver.position;  // receiver -> emitter
    double d = delta.norm();
    if (d <= 0.0) {
        throw std::invalid_argument("emitter and receiver positions coincide");
    }
    // Emission angle phi: LED points straight down.
    double cos_phi = delta.z / d;
    if (cos_phi <= 0.0) return 0.0;

    // Incidence angle psi: between receiver normal and direction to emitter.
    double cos_psi = normal_vector(receiver.orientation).dot(delta) / d;
    if (cos_psi <= std::cos(rx.fov)) return 0.0;

    double m = lambertian_order(em.half_power_semi_angle);
    return (m + 1.0) * rx.detector_area / (2.0 * M_PI * d * d) *
           std::pow(cos_phi, m) * rx.filter_gain * rx.concentrator_gain() *
           cos_psi;
}

namespace {

double to_dbm(double watts, double floor_dbm) {
    if (watts <= 0.0) return floor_dbm;
    return std::max(10.0 * std::log10(watts * 1000.0), floor_dbm);
}

}  // namespace

double vlc_rss(const Anchor& emitter, const VlcEmitterParams& em,
               const ReceiverPose& receiver, const VlcReceiverParams& rx,
               const NoiseConfig& noise, RngStream& rng) {
    noise.validate();
    double gain = vlc_los_gain(emitter, em, receiver, rx);
    double eps = rng.normal(0.0, noise.vlc_relative_sigma);
    double power = em.tx_power * gain * (1.0 + eps);
    return to_dbm(std::max(power, 0.0), noise.rss_floor);
}

double rf_rss(double distance, const RfParams& params, RngStream& rng) {
    params.validate();
    if (!(distance > 0.0)) {
        throw std::invalid_argument("RF distance must be positive");
    }
    double shadowing = rng.normal(0.0, params.shadowing_sigma);
    return params.tx_power - params.ref_loss -
           10.0 * params.path_loss_exponent *
               std::log10(distance / params.ref_distance) +
           shadowing;
}

std::vector<double> rss_vector(const ReceiverPose& receiver,
                               const std::vector<Anchor>& anchors,
                               const ChannelParams& params, RngStream& rng) {
    if (anchors.empty()) {
        throw std::invalid_argument("anchor list is empty");
    }
    std::vector<double> rss;
    rss.reserve(anchors.size());
    for (const Anchor& a : anchors) {
        if (a.kind == AnchorKind::VlcLed) {
            rss.push_back(vlc_rss(a, params.vlc_emitter, receiver,
                                  params.vlc_receiver, params.noise, rng));
        } else {
            double d = (a.position - receiver.position).norm();
            rss.push_back(rf_rss(d, params.rf, rng));
        }
    }
    return rss;
}

}  // namespace vlcloc
