#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlcloc/matrix.hpp"
#include "vlcloc/scenario.hpp"

namespace vlcloc {

struct RowMeta {
    std::uint32_t run_id = 0;
    std::uint32_t rx_index = 0;
    double tilt = 0.0;
    double azimuth = 0.0;
};

/// Everything an estimator needs to know about the transmit side,
/// persisted next to the CSV so datasets are self-describing.
struct AnchorManifest {
    std::vector<Anchor> anchors;
    ChannelParams channel;
    double rx_height = 1.0;
    std::string scenario_hash;
};

struct FingerprintDataset {
    Matrix features;  // rows x n_anchors, dBm
    Matrix targets;   // rows x 2 (x, y), meters
    std::vector<RowMeta> meta;
    AnchorManifest manifest;

    std::size_t rows() const { return features.rows; }
    std::size_t n_features() const { return features.cols; }
    void validate(const RoomConfig* room = nullptr) const;
};

/// One pass over the receiver grid; the row stream for receiver r is
/// derived from (base_seed, run_id, r), independent of evaluation order.
FingerprintDataset generate_run(const Scenario& scenario, std::uint32_t run_id,
                                int threads = 1);

/// Concatenation of runs 0 .. n_runs-1.
FingerprintDataset generate_campaign(const Scenario& scenario, int threads = 1);

/// Writes `path` (CSV) and a sibling manifest JSON (`path` with the .csv
/// extension replaced by .manifest.json).
void save_csv(const FingerprintDataset& ds, const std::string& path);
FingerprintDataset load_csv(const std::string& path);

std::string manifest_path_for(const std::string& csv_path);

/// Uniform row subset without replacement, deterministic in `seed`;
/// identity when max_rows >= rows. Preserves original row order.
FingerprintDataset subsample(const FingerprintDataset& ds, std::size_t max_rows,
                             std::uint64_t seed);

}  // namespace vlcloc
