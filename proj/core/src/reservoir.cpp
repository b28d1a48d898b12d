#include "spinrc/reservoir.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <string>

#include "spinrc/errors.hpp"
#include "spinrc/parallel.hpp"

namespace spinrc {

void FeatureMatrix::assert_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) throw NonFinite("feature matrix contains a non-finite value");
}

namespace {

struct WordTable {
  std::array<double, 16> feature{};
  std::int64_t clamp_events = 0;
};

// Final normalized positions for the 16 possible 4-bit words at this
// operating point.
WordTable msm_word_table(OperatingPoint op, const SkyrmionParams& params, double dt) {
  WordTable table;
  SkyrmionDiag diag;
  for (int word = 0; word < 16; ++word) {
    PulseTrain train;
    for (int bit = 3; bit >= 0; --bit)
      train.push_back(Pulse{((word >> bit) & 1) ? op.amp_uA : -op.amp_uA, op.width_ns});
    SkyrmionState s = skyrmion_step(skyrmion_reset(params), train, dt, params, &diag);
    table.feature[static_cast<std::size_t>(word)] = (s.x - params.x_init) / params.track_length;
  }
  table.clamp_events = diag.clamp_events;
  return table;
}

inline int word_of(const std::array<std::uint8_t, 4>& stream) {
  return (stream[0] << 3) | (stream[1] << 2) | (stream[2] << 1) | stream[3];
}

std::vector<double> features_from_table(const BitImage& img, const WordTable& table,
                                        ScanOrder order) {
  StreamMatrix streams = image_to_streams(img, order);
  std::vector<double> f(196);
  for (int s = 0; s < 196; ++s)
    f[static_cast<std::size_t>(s)] =
        table.feature[static_cast<std::size_t>(word_of(streams.streams[static_cast<std::size_t>(s)]))];
  return f;
}

// Non-reset fallback: the node state carries over from stream to stream.
std::vector<double> msm_features_sequential(const BitImage& img, OperatingPoint op,
                                            const SkyrmionParams& params, const MsmOptions& opt,
                                            std::int64_t* clamp_events) {
  StreamMatrix streams = image_to_streams(img, opt.scan_order);
  std::vector<double> f(196);
  SkyrmionDiag diag;
  SkyrmionState state = skyrmion_reset(params);
  for (int s = 0; s < 196; ++s) {
    PulseTrain train =
        stream_to_pulses(streams.streams[static_cast<std::size_t>(s)], op.amp_uA, op.width_ns);
    state = skyrmion_step(state, train, opt.dt, params, &diag);
    f[static_cast<std::size_t>(s)] = (state.x - params.x_init) / params.track_length;
  }
  if (clamp_events) *clamp_events += diag.clamp_events;
  return f;
}

}  // namespace

std::vector<double> msm_features(const BitImage& img, OperatingPoint op,
                                 const SkyrmionParams& params, const MsmOptions& options,
                                 std::int64_t* clamp_events) {
  if (!(op.amp_uA >= 0.0) || !(op.width_ns > 0.0))
    throw ConfigError("msm_features: operating point requires amp >= 0 and width > 0");
  if (!options.reset_between_streams)
    return msm_features_sequential(img, op, params, options, clamp_events);
  WordTable table = msm_word_table(op, params, options.dt);
  if (clamp_events) *clamp_events += table.clamp_events;
  return features_from_table(img, table, options.scan_order);
}

FeatureMatrix msm_feature_batch(std::span<const BitImage> images, OperatingPoint op,
                                const SkyrmionParams& params, int parallelism,
                                const MsmOptions& options) {
  FeatureMatrix m;
  m.rows = images.size();
  m.cols = 196;
  m.values.resize(m.rows * m.cols);
  m.col_meta.resize(196);
  for (int s = 0; s < 196; ++s) m.col_meta[static_cast<std::size_t>(s)] = s;
  if (images.empty()) return m;

  if (options.reset_between_streams) {
    WordTable table = msm_word_table(op, params, options.dt);
    m.clamp_events = table.clamp_events;
    auto worker = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        std::vector<double> f = features_from_table(images[i], table, options.scan_order);
        std::copy(f.begin(), f.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * 196));
      }
    };
    run_partitioned(worker, images.size(), parallelism);
  } else {
    std::atomic<std::int64_t> clamps{0};
    auto worker = [&](std::size_t begin, std::size_t end) {
      std::int64_t local = 0;
      for (std::size_t i = begin; i < end; ++i) {
        std::vector<double> f = msm_features(images[i], op, params, options, &local);
        std::copy(f.begin(), f.end(), m.values.begin() + static_cast<std::ptrdiff_t>(i * 196));
      }
      clamps += local;
    };
    run_partitioned(worker, images.size(), parallelism);
    m.clamp_events = clamps.load();
  }
  m.assert_finite();
  return m;
}

std::string feature_matrix_to_csv(const FeatureMatrix& m) {
  std::string out;
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (c) out += ',';
    out += "col_" + std::to_string(c);
  }
  out += '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m.at(r, c));
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

FeatureMatrix stno_features(std::span<const double> u, const DriveBank& bank,
                            const StnoFeatureOptions& options, int parallelism) {
  bank.validate();
  if (options.washout < 0 || static_cast<std::size_t>(options.washout) >= u.size())
    throw ConfigError("stno_features: washout must lie in [0, len(u))");
  const std::size_t n = u.size();
  const std::size_t kept = n - static_cast<std::size_t>(options.washout);
  FeatureMatrix m;
  m.rows = kept;
  m.cols = bank.configs.size();
  m.values.resize(m.rows * m.cols);
  m.col_meta.resize(m.cols);

  std::atomic<std::int64_t> clamps{0};
  auto worker = [&](std::size_t begin, std::size_t end) {
    std::int64_t local = 0;
    for (std::size_t j = begin; j < end; ++j) {
      const DriveConfig& cfg = bank.configs[j];
      StnoParams node = stno_params_for_diameter(cfg.diameter);
      PulseTrain train = series_to_pulse_train(u, cfg);
      StnoRun run = stno_step(StnoState{}, train, options.dt, node);
      local += run.clamp_events;
      for (std::size_t k = 0; k < kept; ++k) {
        m.at(k, j) =
            std::sqrt(run.at_pulse_end[k + static_cast<std::size_t>(options.washout)].p);
      }
    }
    clamps += local;
  };
  for (std::size_t j = 0; j < m.cols; ++j) m.col_meta[j] = bank.configs[j].node_id;
  run_partitioned(worker, m.cols, parallelism);
  m.clamp_events = clamps.load();
  m.assert_finite();
  return m;
}

}  // namespace spinrc
