#pragma once

#include <vector>

#include "vlcloc/geometry.hpp"
#include "vlcloc/rng.hpp"

namespace vlcloc {

struct VlcEmitterParams {
    double tx_power = 1.0;                     // watts, optical
    double half_power_semi_angle = M_PI / 3.0; // radians

    void validate() const;
};

struct VlcReceiverParams {
    double detector_area = 1e-4;      // m^2 (1 cm^2)
    double fov = 0.7854;              // radians, half-angle acceptance
    double filter_gain = 1.0;
    double concentrator_index = 1.5;  // refractive index

    void validate() const;

    /// Concentrator gain inside the FOV: n^2 / sin^2(FOV).
    double concentrator_gain() const;
};

struct RfParams {
    double tx_power = 20.0;          // dBm
    double ref_distance = 1.0;       // meters
    double ref_loss = 40.0;          // dB at ref_distance
    double path_loss_exponent = 2.2;
    double shadowing_sigma = 3.0;    // dB

    void validate() const;
};

struct NoiseConfig {
    double vlc_relative_sigma = 0.05;  // multiplicative sigma on linear power
    double rss_floor = -130.0;         // dBm substituted for zero reception

    void validate() const;
};

/// Channel parameters for a full anchor set, VLC and RF alike.
struct ChannelParams {
    VlcEmitterParams vlc_emitter;
    VlcReceiverParams vlc_receiver;
    RfParams rf;
    NoiseConfig noise;
};

/// Lambertian mode number m = -ln 2 / ln(cos phi_half).
double lambertian_order(double half_power_semi_angle);

/// Line-of-sight optical channel gain, zero outside the receiver FOV or
/// behind the emitter plane.
double vlc_los_gain(const Anchor& emitter, const VlcEmitterParams& em,
                    const ReceiverPose& receiver, const VlcReceiverParams& rx);

/// Received VLC power in dBm with multiplicative Gaussian noise on the
/// linear power; non-positive power maps to the RSS floor.
double vlc_rss(const Anchor& emitter, const VlcEmitterParams& em,
               const ReceiverPose& receiver, const VlcReceiverParams& rx,
               const NoiseConfig& noise, RngStream& rng);

/// Log-distance path loss with log-normal shadowing, in dBm.
double rf_rss(double distance, const RfParams& params, RngStream& rng);

/// RSS from each anchor in index order, dispatching on anchor kind.
/// Consumes exactly one Gaussian draw per anchor.
std::vector<double> rss_vector(const ReceiverPose& receiver,
                               const std::vector<Anchor>& anchors,
                               const ChannelParams& params, RngStream& rng);

}  // namespace vlcloc
