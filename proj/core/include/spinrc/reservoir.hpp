#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinrc/encoding.hpp"
#include "spinrc/skyrmion.hpp"
#include "spinrc/stno.hpp"

namespace spinrc {

// Reservoir outputs: rows are samples (MSM) or time steps (STNO), columns are
// features. col_meta records the stream index or node id behind each column.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<int> col_meta;
  std::int64_t clamp_events = 0;

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  void assert_finite() const;
};

struct OperatingPoint {
  double amp_uA = 20.0;
  double width_ns = 10.0;
};

struct MsmOptions {
  double dt = kSkyrmionDefaultDt;
  bool reset_between_streams = true;  // the refresh protocol; non-reset mode is experimental
  ScanOrder scan_order = ScanOrder::row_major;
};

// One feature per stream: reset the node, apply the 4-pulse train, record the
// final position normalized as (x - x_init) / track_length. With the reset
// protocol each stream's feature depends only on its own 4-bit word, so the
// 16 possible words are simulated once and looked up.
std::vector<double> msm_features(const BitImage& img, OperatingPoint op,
                                 const SkyrmionParams& params, const MsmOptions& options = {},
                                 std::int64_t* clamp_events = nullptr);

// Batch wrapper; row i equals msm_features(image i) regardless of the number
// of worker threads.
FeatureMatrix msm_feature_batch(std::span<const BitImage> images, OperatingPoint op,
                                const SkyrmionParams& params, int parallelism = 1,
                                const MsmOptions& options = {});

struct StnoFeatureOptions {
  double dt = kStnoDefaultDt;
  int washout = 0;  // rows dropped from the front after harvesting
};

// One column per bank node: encode u through the node's DriveConfig and
// integrate continuously (no reset), recording the envelope sqrt(p) at the
// end of each pulse.
FeatureMatrix stno_features(std::span<const double> u, const DriveBank& bank,
                            const StnoFeatureOptions& options = {}, int parallelism = 1);

// CSV dump with header col_0..col_{F-1}.
std::string feature_matrix_to_csv(const FeatureMatrix& m);

}  // namespace spinrc
