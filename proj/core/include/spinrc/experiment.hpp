#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinrc/encoding.hpp"
#include "spinrc/readout.hpp"
#include "spinrc/reservoir.hpp"
#include "spinrc/skyrmion.hpp"
#include "spinrc/tasks.hpp"

namespace spinrc {

enum class ExperimentTask { mnist, second_order, narma10, simulate, sweep };

struct Seeds {
  std::uint64_t data = 1;
  std::uint64_t train = 2;
  std::uint64_t test = 3;
};

struct MnistConfig {
  // Empty paths -> the seeded synthetic digit set.
  std::string train_images, train_labels;
  std::string test_images, test_labels;
  std::size_t n_train = 10000;
  std::size_t n_test = 2000;
};

struct SeriesConfig {
  std::size_t n_train = 800;
  std::size_t n_test = 800;
  int washout = 0;
  double dt = kStnoDefaultDt;
};

struct SweepGrid {
  std::vector<double> amps{5, 10, 15, 20, 25};    // uA
  std::vector<double> widths{2, 5, 10, 15, 20};   // ns
  std::size_t n_train = 400;
  std::size_t n_test = 200;
};

struct SimulateConfig {
  std::string node = "msm";  // "msm" | "stno"
  std::vector<Pulse> pulses;
  double dt = 0.0;  // 0 -> node default
  int stride = 1;
  int diameter = 240;  // STNO only
};

struct CacheConfig {
  bool enabled = false;
  std::string dir;  // empty -> $SPINRC_CACHE_DIR
};

struct EncodingConfig {
  ScanOrder scan_order = ScanOrder::row_major;
  std::uint8_t threshold = 128;
};

struct ExperimentConfig {
  ExperimentTask task = ExperimentTask::mnist;
  Seeds seeds;
  std::string output_dir = "out";
  int parallelism = 1;
  CacheConfig cache;
  SkyrmionParams skyrmion;
  std::optional<DriveBank> bank;  // nullopt -> build_default_bank()
  OperatingPoint operating_point;
  EncodingConfig encoding;
  TrainHyper classifier_hyper{0.1, 20, 64, 0.0, 2};
  TrainHyper regressor_hyper{0.05, 200000, 1, 1e-8, 2};
  double msm_dt = kSkyrmionDefaultDt;
  bool msm_reset = true;
  MnistConfig mnist;
  SeriesConfig series;
  SweepGrid sweep;
  SimulateConfig simulate;
  std::size_t gen_count = 800;  // gen-data sample count

  void validate() const;
};

// JSON config (schema_version 1) with exhaustive validation diagnostics.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

// Stable hash of the canonical config serialization (fnv1a64).
std::string config_hash(const ExperimentConfig& config);

struct MetricsReport {
  std::string task;
  std::optional<double> accuracy;
  std::optional<ConfusionMatrix> confusion;
  std::optional<double> nmse_train, nmse_test;
  std::optional<double> nrmse_train, nrmse_test;
  std::size_t n_train = 0, n_test = 0;
  std::string config_hash;
  std::int64_t clamp_events = 0;
};

// encode -> reservoir -> train -> evaluate, writing metrics.json,
// predictions.csv, model.json and manifest.json into output_dir.
MetricsReport run_experiment(const ExperimentConfig& config);

struct SweepCell {
  double amp_uA = 0.0;
  double width_ns = 0.0;
  double test_accuracy = 0.0;  // NaN when the cell failed
  std::string error;
};

// Per-cell seeds derived from the base seeds and the cell coordinates, so
// adding or removing grid points never perturbs the other cells.
Seeds sweep_cell_seeds(const Seeds& base, double amp_uA, double width_ns);

// One desk-scale MNIST pipeline per grid cell; failed cells are recorded as
// NaN and the sweep continues. Also writes sweep.csv + manifest.json.
std::vector<SweepCell> run_sweep(const ExperimentConfig& config);

// Scripted pulse train -> dense trace CSV (t_ns,x_nm or
// t_ns,p,envelope,phi_rad).
void simulate_node(const ExperimentConfig& config);

// Materializes the seeded dataset for offline inspection: series CSV
// (k,u,y) or a synthetic IDX pair.
void gen_data(const ExperimentConfig& config);

}  // namespace spinrc
