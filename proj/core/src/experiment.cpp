#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinrc/errors.hpp"
#include "spinrc/experiment.hpp"
#include "spinrc/hash.hpp"
#include "spinrc/parallel.hpp"
#include "spinrc/rng.hpp"

namespace spinrc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot create output file " + path.string());
  out << content;
}

// ---- feature cache ----

std::string cache_directory(const ExperimentConfig& c) {
  if (!c.cache.dir.empty()) return c.cache.dir;
  if (const char* env = std::getenv("SPINRC_CACHE_DIR")) return env;
  return ".spinrc_cache";
}

constexpr std::uint32_t kCacheMagic = 0x53504643;  // "SPFC"

void store_features(const fs::path& path, const FeatureMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return;  // cache is best-effort
  auto put64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  std::uint32_t magic = kCacheMagic;
  out.write(reinterpret_cast<const char*>(&magic), 4);
  put64(m.rows);
  put64(m.cols);
  put64(static_cast<std::uint64_t>(m.clamp_events));
  out.write(reinterpret_cast<const char*>(m.col_meta.data()),
            static_cast<std::streamsize>(m.col_meta.size() * sizeof(int)));
  out.write(reinterpret_cast<const char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * sizeof(double)));
}

bool load_features(const fs::path& path, FeatureMatrix& m) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::uint32_t magic = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  if (!in || magic != kCacheMagic) return false;
  std::uint64_t rows = 0, cols = 0, clamps = 0;
  in.read(reinterpret_cast<char*>(&rows), 8);
  in.read(reinterpret_cast<char*>(&cols), 8);
  in.read(reinterpret_cast<char*>(&clamps), 8);
  if (!in) return false;
  m.rows = rows;
  m.cols = cols;
  m.clamp_events = static_cast<std::int64_t>(clamps);
  m.col_meta.resize(cols);
  m.values.resize(rows * cols);
  in.read(reinterpret_cast<char*>(m.col_meta.data()),
          static_cast<std::streamsize>(m.col_meta.size() * sizeof(int)));
  in.read(reinterpret_cast<char*>(m.values.data()),
          static_cast<std::streamsize>(m.values.size() * sizeof(double)));
  return static_cast<bool>(in);
}

template <typename Compute>
FeatureMatrix cached_features(const ExperimentConfig& c, const std::string& key,
                              Compute&& compute) {
  if (!c.cache.enabled) return compute();
  fs::path dir = cache_directory(c);
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path file = dir / ("features-" + hash_hex(fnv1a64(key)) + ".bin");
  FeatureMatrix m;
  if (load_features(file, m)) return m;
  m = compute();
  store_features(file, m);
  return m;
}

// ---- dataset assembly ----

struct LabeledImages {
  std::vector<BitImage> images;
  std::vector<int> labels;
  std::string identity;  // cache-key component describing the data source
};

LabeledImages prepare_images(const std::string& images_path, const std::string& labels_path,
                             std::size_t n, std::uint64_t synth_seed,
                             const EncodingConfig& enc) {
  ImageDataset raw;
  std::string identity;
  if (!images_path.empty()) {
    raw = load_mnist_idx(images_path, labels_path);
    if (raw.count < n)
      throw CountMismatch("dataset " + images_path + " holds " + std::to_string(raw.count) +
                          " images, need " + std::to_string(n));
    identity = "idx:" + images_path + ":" + std::to_string(n);
  } else {
    raw = synth_digits(n, synth_seed);
    identity = "synth:" + std::to_string(synth_seed) + ":" + std::to_string(n);
  }
  LabeledImages out;
  out.identity = identity + ":thr" + std::to_string(enc.threshold);
  out.images.reserve(n);
  out.labels.assign(raw.labels.begin(), raw.labels.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    out.images.push_back(binarize_image(raw.image(i), enc.threshold));
  return out;
}

std::string msm_cache_key(const ExperimentConfig& c, const std::string& data_identity) {
  std::ostringstream ss;
  const SkyrmionParams& p = c.skyrmion;
  ss << "msm|" << data_identity << '|' << fmt_double(c.operating_point.amp_uA) << '|'
     << fmt_double(c.operating_point.width_ns) << '|' << fmt_double(c.msm_dt) << '|'
     << c.msm_reset << '|'
     << (c.encoding.scan_order == ScanOrder::row_major ? "row" : "col") << '|'
     << fmt_double(p.track_length) << ',' << fmt_double(p.x_min) << ',' << fmt_double(p.x_max)
     << ',' << fmt_double(p.x_init) << ',' << fmt_double(p.w_end) << ',' << fmt_double(p.w_center)
     << ',' << fmt_double(p.w_sigma) << ',' << fmt_double(p.mu0) << ',' << fmt_double(p.u_edge)
     << ',' << fmt_double(p.lambda_edge) << ',' << fmt_double(p.u_c) << ','
     << fmt_double(p.sigma_c);
  return ss.str();
}

std::string stno_cache_key(const ExperimentConfig& c, const DriveBank& bank,
                           const SeriesDataset& data, const char* tag) {
  std::ostringstream ss;
  ss << "stno|" << task_name(data.task) << '|' << tag << '|' << data.seed << '|' << data.u.size()
     << '|' << fmt_double(c.series.dt) << '|' << c.series.washout;
  for (const DriveConfig& e : bank.configs)
    ss << '|' << e.diameter << ',' << fmt_double(e.i_offset) << ',' << fmt_double(e.gain) << ','
       << fmt_double(e.pulse_width);
  return ss.str();
}

// ---- report / artifact writing ----

json report_to_json(const MetricsReport& r, const json& paper_reference) {
  json j;
  j["task"] = r.task;
  j["config_hash"] = r.config_hash;
  j["hash_algorithm"] = "fnv1a64";
  j["n_train"] = r.n_train;
  j["n_test"] = r.n_test;
  j["clamp_events"] = r.clamp_events;
  if (r.accuracy) j["accuracy"] = *r.accuracy;
  if (r.confusion) {
    json rows = json::array();
    for (const auto& row : *r.confusion) rows.push_back(row);
    j["confusion"] = rows;
  }
  if (r.nmse_train) j["nmse_train"] = *r.nmse_train;
  if (r.nmse_test) j["nmse_test"] = *r.nmse_test;
  if (r.nrmse_train) j["nrmse_train"] = *r.nrmse_train;
  if (r.nrmse_test) j["nrmse_test"] = *r.nrmse_test;
  if (!paper_reference.is_null()) j["paper_reference"] = paper_reference;
  return j;
}

void write_manifest(const ExperimentConfig& c, const fs::path& dir,
                    const std::vector<std::string>& files, double wall_seconds) {
  json m;
  m["config_hash"] = config_hash(c);
  m["hash_algorithm"] = "fnv1a64";
  m["seeds"] = {{"data", c.seeds.data}, {"train", c.seeds.train}, {"test", c.seeds.test}};
  m["spinrc_version"] = "0.1.0";
  m["wall_time_s"] = wall_seconds;
  m["timestamp_unix"] = static_cast<std::int64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
  json fj;
  for (const std::string& f : files) fj[f] = hash_hex(hash_file((dir / f).string()));
  m["files"] = fj;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

struct MnistRunResult {
  MetricsReport report;
  ReadoutModel model;
  std::vector<int> test_labels;
  std::vector<int> predictions;
};

// Shared by run_experiment and the sweep cells.
MnistRunResult run_mnist_pipeline(const ExperimentConfig& c) {
  LabeledImages train = prepare_images(c.mnist.train_images, c.mnist.train_labels,
                                       c.mnist.n_train, c.seeds.data, c.encoding);
  LabeledImages test = prepare_images(c.mnist.test_images, c.mnist.test_labels, c.mnist.n_test,
                                      c.seeds.test, c.encoding);
  MsmOptions opt{c.msm_dt, c.msm_reset, c.encoding.scan_order};
  auto compute = [&](const LabeledImages& data) {
    return cached_features(c, msm_cache_key(c, data.identity), [&] {
      return msm_feature_batch(data.images, c.operating_point, c.skyrmion, c.parallelism, opt);
    });
  };
  FeatureMatrix ftrain = compute(train);
  FeatureMatrix ftest = compute(test);

  TrainHyper hyper = c.classifier_hyper;
  hyper.seed = c.seeds.train;
  TrainResult trained = train_classifier_gd(ftrain, train.labels, hyper);
  std::vector<int> pred = predict_class(trained.model, ftest);

  MnistRunResult out;
  out.report.task = "mnist";
  out.report.accuracy = accuracy(pred, test.labels);
  out.report.confusion = confusion_matrix(pred, test.labels);
  out.report.n_train = c.mnist.n_train;
  out.report.n_test = c.mnist.n_test;
  out.report.clamp_events = ftrain.clamp_events + ftest.clamp_events;
  out.report.config_hash = config_hash(c);
  out.model = std::move(trained.model);
  out.test_labels = std::move(test.labels);
  out.predictions = std::move(pred);
  return out;
}

struct SeriesRunResult {
  MetricsReport report;
  ReadoutModel model;
  SeriesDataset test;
  std::vector<double> predictions;  // test-phase
};

SeriesRunResult run_series_pipeline(const ExperimentConfig& c) {
  TaskId task = c.task == ExperimentTask::second_order ? TaskId::second_order : TaskId::narma10;
  SeriesDataset full = make_series_dataset(task, c.series.n_train, c.seeds.data);
  auto [train, test] = split_series(full, c.series.n_train, c.seeds.test, c.series.n_test);

  DriveBank bank = c.bank ? *c.bank : build_default_bank();
  StnoFeatureOptions opt{c.series.dt, c.series.washout};
  auto compute = [&](const SeriesDataset& d, const char* tag) {
    return cached_features(c, stno_cache_key(c, bank, d, tag), [&] {
      return stno_features(d.u, bank, opt, c.parallelism);
    });
  };
  FeatureMatrix ftrain = compute(train, "train");
  FeatureMatrix ftest = compute(test, "test");
  std::span<const double> ytrain(train.y.data() + c.series.washout,
                                 train.y.size() - static_cast<std::size_t>(c.series.washout));
  std::span<const double> ytest(test.y.data() + c.series.washout,
                                test.y.size() - static_cast<std::size_t>(c.series.washout));

  TrainHyper hyper = c.regressor_hyper;
  hyper.seed = c.seeds.train;
  TrainResult trained = train_regressor_gd(ftrain, ytrain, hyper);
  std::vector<double> pred_train = predict_series(trained.model, ftrain);
  std::vector<double> pred_test = predict_series(trained.model, ftest);

  SeriesRunResult out;
  out.report.task = task_name(task);
  out.report.nmse_train = nmse(ytrain, pred_train);
  out.report.nmse_test = nmse(ytest, pred_test);
  out.report.nrmse_train = std::sqrt(*out.report.nmse_train);
  out.report.nrmse_test = std::sqrt(*out.report.nmse_test);
  out.report.n_train = ytrain.size();
  out.report.n_test = ytest.size();
  out.report.clamp_events = ftrain.clamp_events + ftest.clamp_events;
  out.report.config_hash = config_hash(c);
  out.model = std::move(trained.model);
  out.test = std::move(test);
  out.predictions = std::move(pred_test);
  return out;
}

}  // namespace

MetricsReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  auto t0 = std::chrono::steady_clock::now();
  fs::path dir = config.output_dir;
  fs::create_directories(dir);

  MetricsReport report;
  json paper_reference;
  std::string predictions_csv;
  std::string model_json;

  switch (config.task) {
    case ExperimentTask::mnist: {
      MnistRunResult r = run_mnist_pipeline(config);
      report = std::move(r.report);
      paper_reference = {{"test_accuracy", 0.876}, {"scale", "50000 train / 10000 test"}};
      std::ostringstream csv;
      csv << "index,label,pred\n";
      for (std::size_t i = 0; i < r.predictions.size(); ++i)
        csv << i << ',' << r.test_labels[i] << ',' << r.predictions[i] << '\n';
      predictions_csv = csv.str();
      model_json = model_to_json(r.model);
      break;
    }
    case ExperimentTask::second_order:
    case ExperimentTask::narma10: {
      SeriesRunResult r = run_series_pipeline(config);
      report = std::move(r.report);
      if (config.task == ExperimentTask::second_order)
        paper_reference = {{"nmse_train", 1.17e-3}, {"nmse_test", 1.31e-3}};
      else
        paper_reference = {{"nrmse_train", 0.123}, {"nrmse_test", 0.128}};
      std::ostringstream csv;
      csv << "k,y,y_pred\n";
      for (std::size_t k = 0; k < r.predictions.size(); ++k)
        csv << (k + static_cast<std::size_t>(config.series.washout)) << ','
            << fmt_double(r.test.y[k + static_cast<std::size_t>(config.series.washout)]) << ','
            << fmt_double(r.predictions[k]) << '\n';
      predictions_csv = csv.str();
      model_json = model_to_json(r.model);
      break;
    }
    default:
      throw ConfigError("run_experiment handles mnist|second_order|narma10; use the dedicated "
                        "sweep/simulate entry points");
  }

  write_text(dir / "metrics.json", report_to_json(report, paper_reference).dump(2) + "\n");
  write_text(dir / "predictions.csv", predictions_csv);
  write_text(dir / "model.json", model_json + "\n");
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(config, dir, {"metrics.json", "predictions.csv", "model.json"}, wall);
  return report;
}

Seeds sweep_cell_seeds(const Seeds& base, double amp_uA, double width_ns) {
  std::uint64_t amp_bits, width_bits;
  static_assert(sizeof(double) == 8);
  std::memcpy(&amp_bits, &amp_uA, 8);
  std::memcpy(&width_bits, &width_ns, 8);
  std::uint64_t tag = combine_seed(amp_bits, width_bits);
  Seeds s;
  s.data = combine_seed(combine_seed(base.data, tag), 1);
  s.train = combine_seed(combine_seed(base.train, tag), 2);
  s.test = combine_seed(combine_seed(base.test, tag), 3);
  return s;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& config) {
  config.validate();
  if (config.task != ExperimentTask::sweep)
    throw ConfigError("run_sweep requires task = sweep");
  auto t0 = std::chrono::steady_clock::now();
  fs::path dir = config.output_dir;
  fs::create_directories(dir);

  std::vector<SweepCell> cells;
  for (double amp : config.sweep.amps)
    for (double width : config.sweep.widths) cells.push_back(SweepCell{amp, width, 0.0, ""});

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      SweepCell& cell = cells[i];
      ExperimentConfig cc = config;
      cc.task = ExperimentTask::mnist;
      cc.operating_point = OperatingPoint{cell.amp_uA, cell.width_ns};
      cc.mnist.n_train = config.sweep.n_train;
      cc.mnist.n_test = config.sweep.n_test;
      cc.seeds = sweep_cell_seeds(config.seeds, cell.amp_uA, cell.width_ns);
      cc.parallelism = 1;  // cells themselves run in parallel
      try {
        MnistRunResult r = run_mnist_pipeline(cc);
        cell.test_accuracy = *r.report.accuracy;
      } catch (const std::exception& e) {
        cell.test_accuracy = std::numeric_limits<double>::quiet_NaN();
        cell.error = e.what();
      }
    }
  };
  run_partitioned(worker, cells.size(), config.parallelism);

  std::ostringstream csv;
  csv << "amp_uA,width_ns,test_accuracy,n_train,n_test,error\n";
  for (const SweepCell& cell : cells) {
    csv << fmt_double(cell.amp_uA) << ',' << fmt_double(cell.width_ns) << ','
        << (std::isnan(cell.test_accuracy) ? "NaN" : fmt_double(cell.test_accuracy)) << ','
        << config.sweep.n_train << ',' << config.sweep.n_test << ",\"" << cell.error << "\"\n";
  }
  write_text(dir / "sweep.csv", csv.str());
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(config, dir, {"sweep.csv"}, wall);
  return cells;
}

void simulate_node(const ExperimentConfig& config) {
  config.validate();
  if (config.task != ExperimentTask::simulate)
    throw ConfigError("simulate_node requires task = simulate");
  auto t0 = std::chrono::steady_clock::now();
  fs::path dir = config.output_dir;
  fs::create_directories(dir);

  std::ostringstream csv;
  const SimulateConfig& sim = config.simulate;
  if (sim.node == "msm") {
    csv << "t_ns,x_nm\n";
    if (!sim.pulses.empty()) {
      double dt = sim.dt > 0.0 ? sim.dt : kSkyrmionDefaultDt;
      skyrmion_trace(
          skyrmion_reset(config.skyrmion), sim.pulses, dt, config.skyrmion,
          [&](double t, double x) { csv << fmt_double(t) << ',' << fmt_double(x) << '\n'; },
          sim.stride);
    }
  } else {
    csv << "t_ns,p,envelope,phi_rad\n";
    if (!sim.pulses.empty()) {
      double dt = sim.dt > 0.0 ? sim.dt : kStnoDefaultDt;
      StnoParams node = stno_params_for_diameter(sim.diameter);
      stno_step(
          StnoState{}, sim.pulses, dt, node,
          [&](double t, double p, double phi) {
            csv << fmt_double(t) << ',' << fmt_double(p) << ',' << fmt_double(std::sqrt(p)) << ','
                << fmt_double(phi) << '\n';
          },
          sim.stride);
    }
  }
  write_text(dir / "trace.csv", csv.str());
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(config, dir, {"trace.csv"}, wall);
}

void gen_data(const ExperimentConfig& config) {
  config.validate();
  auto t0 = std::chrono::steady_clock::now();
  fs::path dir = config.output_dir;
  fs::create_directories(dir);
  std::vector<std::string> files;

  if (config.task == ExperimentTask::mnist || config.task == ExperimentTask::sweep) {
    ImageDataset d = synth_digits(config.gen_count, config.seeds.data);
    write_mnist_idx(d, (dir / "synth-images-idx3-ubyte").string(),
                    (dir / "synth-labels-idx1-ubyte").string());
    files = {"synth-images-idx3-ubyte", "synth-labels-idx1-ubyte"};
  } else if (config.task == ExperimentTask::second_order ||
             config.task == ExperimentTask::narma10) {
    TaskId task =
        config.task == ExperimentTask::second_order ? TaskId::second_order : TaskId::narma10;
    SeriesDataset d = make_series_dataset(task, config.gen_count, config.seeds.data);
    std::ostringstream csv;
    csv << "k,u,y\n";
    for (std::size_t k = 0; k < d.u.size(); ++k)
      csv << (k + 1) << ',' << fmt_double(d.u[k]) << ',' << fmt_double(d.y[k]) << '\n';
    write_text(dir / "series.csv", csv.str());
    files = {"series.csv"};
  } else {
    throw ConfigError("gen-data requires task = mnist|second_order|narma10");
  }
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(config, dir, files, wall);
}

}  // namespace spinrc
