#pragma once

#include <span>
#include <vector>

#include "vlcloc/dataset.hpp"

namespace vlcloc {

struct ClassicResult {
    double x = 0.0;
    double y = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Non-learning baseline: inverts the noise-free channel model to
/// per-anchor range estimates (VLC assumes an upright receiver and on-axis
/// Lambertian inversion, RF inverts the log-distance law), then solves
/// planar multilateration by Gauss-Newton from the strongest anchor.
/// Requires at least 3 anchors with RSS above the floor. On divergence the
/// best iterate seen is returned with converged = false.
ClassicResult classic_locate(std::span<const double> rss_dbm,
                             const AnchorManifest& manifest);

/// Range estimate from a single VLC RSS sample under the tilt-0 assumption.
double invert_vlc_range(double rss_dbm, const ChannelParams& channel,
                        double vertical_gap);

/// Range estimate from a single RF RSS sample (log-distance inversion).
double invert_rf_range(double rss_dbm, const RfParams& rf);

}  // namespace vlcloc
