#include "vlcloc/classic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vlcloc/channel.hpp"

namespace vlcloc {

double invert_vlc_range(double rss_dbm, const ChannelParams& channel,
                        double vertical_gap) {
    if (!(vertical_gap > 0.0)) {
        throw std::invalid_argument("vertical gap must be positive");
    }
    double power = std::pow(10.0, rss_dbm / 10.0) / 1000.0;  // dBm -> watts
    double m = lambertian_order(channel.vlc_emitter.half_power_semi_angle);
    double c0 = channel.vlc_emitter.tx_power * (m + 1.0) *
                channel.vlc_receiver.detector_area *
                channel.vlc_receiver.filter_gain *
                channel.vlc_receiver.concentrator_gain() / (2.0 * M_PI);
    // Upright receiver: P = c0 * h^(m+1) / d^(m+3).
    return std::pow(c0 * std::pow(vertical_gap, m + 1.0) / power,
                    1.0 / (m + 3.0));
}

double invert_rf_range(double rss_dbm, const RfParams& rf) {
    double exponent = (rf.tx_power - rf.ref_loss - rss_dbm) /
                      (10.0 * rf.path_loss_exponent);
    return rf.ref_distance * std::pow(10.0, exponent);
}

ClassicResult classic_locate(std::span<const double> rss_dbm,
                             const AnchorManifest& manifest) {
    const auto& anchors = manifest.anchors;
    if (rss_dbm.size() != anchors.size()) {
        throw std::invalid_argument("RSS arity does not match anchor manifest");
    }
    const double floor = manifest.channel.noise.rss_floor;

    struct Range {
        double ax, ay, r;
        double rss;
    };
    std::vector<Range> ranges;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        if (rss_dbm[i] <= floor) continue;
        double gap = anchors[i].position.z - manifest.rx_height;
        double d = anchors[i].kind == AnchorKind::VlcLed
                       ? invert_vlc_range(rss_dbm[i], manifest.channel, gap)
                       : invert_rf_range(rss_dbm[i], manifest.channel.rf);
        double horiz2 = d * d - gap * gap;
        ranges.push_back({anchors[i].position.x, anchors[i].position.y,
                          horiz2 > 0.0 ? std::sqrt(horiz2) : 0.0, rss_dbm[i]});
    }
    if (ranges.size() < 3) {
        throw std::runtime_error("classic localization needs >= 3 usable anchors");
    }

    // Start at the strongest anchor, nudged toward the anchor centroid so
    // the first Jacobian row is well defined.
    std::size_t strongest = 0;
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
        if (ranges[i].rss > ranges[strongest].rss) strongest = i;
        cx += ranges[i].ax;
        cy += ranges[i].ay;
    }
    cx /= ranges.size();
    cy /= ranges.size();
    double px = ranges[strongest].ax, py = ranges[strongest].ay;
    double dx = cx - px, dy = cy - py;
    double dn = std::hypot(dx, dy);
    if (dn > 1e-9) {
        px += 0.1 * dx / dn;
        py += 0.1 * dy / dn;
    } else {
        px += 0.01;
        py += 0.01;
    }

    auto cost_at = [&](double x, double y) {
        double c = 0.0;
        for (const Range& g : ranges) {
            double d = std::hypot(x - g.ax, y - g.ay) - g.r;
            c += d * d;
        }
        return c;
    };

    double best_x = px, best_y = py;
    double best_cost = cost_at(px, py);
    const int max_iter = 100;
    const double step_tol = 1e-6;
    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0;
        double jtf0 = 0.0, jtf1 = 0.0;
        for (const Range& g : ranges) {
            double ex = px - g.ax, ey = py - g.ay;
            double dist = std::max(std::hypot(ex, ey), 1e-9);
            double f = dist - g.r;
            double jx = ex / dist, jy = ey / dist;
            jtj00 += jx * jx;
            jtj01 += jx * jy;
            jtj11 += jy * jy;
            jtf0 += jx * f;
            jtf1 += jy * f;
        }
        double det = jtj00 * jtj11 - jtj01 * jtj01;
        if (std::fabs(det) < 1e-12) break;
        double sx = -(jtj11 * jtf0 - jtj01 * jtf1) / det;
        double sy = -(-jtj01 * jtf0 + jtj00 * jtf1) / det;
        px += sx;
        py += sy;
        if (!std::isfinite(px) || !std::isfinite(py)) break;
        double c = cost_at(px, py);
        if (c < best_cost) {
            best_cost = c;
            best_x = px;
            best_y = py;
        }
        if (std::hypot(sx, sy) < step_tol) {
            converged = true;
            break;
        }
    }
    return {best_x, best_y, converged, iter};
}

}  // namespace vlcloc
