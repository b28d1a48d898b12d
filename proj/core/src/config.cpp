#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spinrc/errors.hpp"
#include "spinrc/experiment.hpp"
#include "spinrc/hash.hpp"

namespace spinrc {

namespace {

using nlohmann::json;

const char* task_str(ExperimentTask t) {
  switch (t) {
    case ExperimentTask::mnist: return "mnist";
    case ExperimentTask::second_order: return "second_order";
    case ExperimentTask::narma10: return "narma10";
    case ExperimentTask::simulate: return "simulate";
    case ExperimentTask::sweep: return "sweep";
  }
  return "?";
}

ExperimentTask parse_task(const std::string& s) {
  if (s == "mnist") return ExperimentTask::mnist;
  if (s == "second_order") return ExperimentTask::second_order;
  if (s == "narma10") return ExperimentTask::narma10;
  if (s == "simulate") return ExperimentTask::simulate;
  if (s == "sweep") return ExperimentTask::sweep;
  throw ConfigError("config: unknown task '" + s +
                    "' (expected mnist|second_order|narma10|simulate|sweep)");
}

// Rejects keys the schema does not know about; typos in config files should
// fail loudly, not silently fall back to defaults.
void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError("config: unknown key '" + where + it.key() + "'");
  }
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (parallelism < 1) throw ConfigError("config: parallelism must be >= 1");
  skyrmion.validate();
  if (bank) bank->validate();
  if (!(operating_point.amp_uA >= 0.0)) throw ConfigError("config: amp must be >= 0");
  if (!(operating_point.width_ns > 0.0)) throw ConfigError("config: width must be > 0");
  if (!(msm_dt > 0.0) || !(series.dt > 0.0)) throw ConfigError("config: dt must be > 0");
  classifier_hyper.validate();
  regressor_hyper.validate();
  if (task == ExperimentTask::mnist || task == ExperimentTask::sweep) {
    if (mnist.n_train < 1 || mnist.n_test < 1)
      throw ConfigError("config: mnist sample counts must be >= 1");
    for (const std::string& p : {mnist.train_images, mnist.train_labels, mnist.test_images,
                                 mnist.test_labels}) {
      if (!p.empty() && !std::filesystem::exists(p))
        throw ConfigError("config: dataset path does not exist: " + p);
    }
  }
  if (task == ExperimentTask::second_order || task == ExperimentTask::narma10) {
    if (series.n_train < 25) throw ConfigError("config: series n_train must be >= 25");
    if (series.washout < 0 || static_cast<std::size_t>(series.washout) >= series.n_train)
      throw ConfigError("config: washout must lie in [0, n_train)");
    if (seeds.test == seeds.data)
      throw ConfigError("config: test seed must differ from the data seed");
  }
  if (task == ExperimentTask::sweep) {
    if (sweep.amps.empty() || sweep.widths.empty())
      throw ConfigError("config: sweep grid must be non-empty");
    for (double a : sweep.amps)
      if (!(a >= 0.0)) throw ConfigError("config: sweep amps must be >= 0");
    for (double w : sweep.widths)
      if (!(w > 0.0)) throw ConfigError("config: sweep widths must be > 0");
  }
  if (task == ExperimentTask::simulate) {
    if (simulate.node != "msm" && simulate.node != "stno")
      throw ConfigError("config: simulate.node must be 'msm' or 'stno'");
    if (simulate.stride < 1) throw ConfigError("config: simulate.stride must be >= 1");
    for (const Pulse& p : simulate.pulses)
      if (!(p.duration_ns > 0.0)) throw ConfigError("config: pulse durations must be > 0");
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j, "", {"schema_version", "task", "seeds", "output_dir", "parallelism", "cache",
                     "skyrmion", "bank", "operating_point", "encoding", "classifier", "regressor",
                     "msm_dt", "msm_reset", "mnist", "series", "sweep", "simulate", "gen_count"});
  int version = 1;
  read_field(j, "schema_version", version);
  if (version != 1) throw ConfigError("config: unsupported schema_version");
  if (!j.contains("task")) throw ConfigError("config: missing required key 'task'");

  ExperimentConfig c;
  c.task = parse_task(j.at("task").get<std::string>());
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    check_keys(s, "seeds.", {"data", "train", "test"});
    read_field(s, "data", c.seeds.data);
    read_field(s, "train", c.seeds.train);
    read_field(s, "test", c.seeds.test);
  }
  read_field(j, "output_dir", c.output_dir);
  read_field(j, "parallelism", c.parallelism);
  if (j.contains("cache")) {
    const json& s = j["cache"];
    check_keys(s, "cache.", {"enabled", "dir"});
    read_field(s, "enabled", c.cache.enabled);
    read_field(s, "dir", c.cache.dir);
  }
  if (j.contains("skyrmion")) {
    const json& s = j["skyrmion"];
    check_keys(s, "skyrmion.",
               {"track_length", "x_min", "x_max", "x_init", "w_end", "w_center", "w_sigma", "mu0",
                "u_edge", "lambda_edge", "u_c", "sigma_c"});
    read_field(s, "track_length", c.skyrmion.track_length);
    read_field(s, "x_min", c.skyrmion.x_min);
    read_field(s, "x_max", c.skyrmion.x_max);
    read_field(s, "x_init", c.skyrmion.x_init);
    read_field(s, "w_end", c.skyrmion.w_end);
    read_field(s, "w_center", c.skyrmion.w_center);
    read_field(s, "w_sigma", c.skyrmion.w_sigma);
    read_field(s, "mu0", c.skyrmion.mu0);
    read_field(s, "u_edge", c.skyrmion.u_edge);
    read_field(s, "lambda_edge", c.skyrmion.lambda_edge);
    read_field(s, "u_c", c.skyrmion.u_c);
    read_field(s, "sigma_c", c.skyrmion.sigma_c);
  }
  if (j.contains("bank") && !j["bank"].is_null()) {
    DriveBank bank;
    for (const json& e : j["bank"]) {
      check_keys(e, "bank[].", {"node_id", "diameter", "i_offset", "gain", "pulse_width"});
      DriveConfig cfg;
      read_field(e, "node_id", cfg.node_id);
      read_field(e, "diameter", cfg.diameter);
      read_field(e, "i_offset", cfg.i_offset);
      read_field(e, "gain", cfg.gain);
      read_field(e, "pulse_width", cfg.pulse_width);
      bank.configs.push_back(cfg);
    }
    c.bank = std::move(bank);
  }
  if (j.contains("operating_point")) {
    const json& s = j["operating_point"];
    check_keys(s, "operating_point.", {"amp_uA", "width_ns"});
    read_field(s, "amp_uA", c.operating_point.amp_uA);
    read_field(s, "width_ns", c.operating_point.width_ns);
  }
  if (j.contains("encoding")) {
    const json& s = j["encoding"];
    check_keys(s, "encoding.", {"scan_order", "threshold"});
    std::string order = "row_major";
    read_field(s, "scan_order", order);
    if (order == "row_major")
      c.encoding.scan_order = ScanOrder::row_major;
    else if (order == "column_major")
      c.encoding.scan_order = ScanOrder::column_major;
    else
      throw ConfigError("config: scan_order must be row_major or column_major");
    int threshold = 128;
    read_field(s, "threshold", threshold);
    if (threshold < 0 || threshold > 255) throw ConfigError("config: threshold must be a byte");
    c.encoding.threshold = static_cast<std::uint8_t>(threshold);
  }
  auto read_hyper = [&](const char* key, TrainHyper& h) {
    if (!j.contains(key)) return;
    const json& s = j[key];
    check_keys(s, std::string(key) + ".", {"learning_rate", "epochs", "batch_size", "l2", "loss"});
    read_field(s, "learning_rate", h.learning_rate);
    read_field(s, "epochs", h.epochs);
    read_field(s, "batch_size", h.batch_size);
    read_field(s, "l2", h.l2);
    if (s.contains("loss")) {
      std::string loss = s["loss"].get<std::string>();
      if (loss == "one_vs_all")
        h.loss = ClassifierLoss::one_vs_all;
      else if (loss == "softmax")
        h.loss = ClassifierLoss::softmax;
      else
        throw ConfigError("config: " + std::string(key) + ".loss must be one_vs_all or softmax");
    }
  };
  read_hyper("classifier", c.classifier_hyper);
  read_hyper("regressor", c.regressor_hyper);
  c.classifier_hyper.seed = c.seeds.train;
  c.regressor_hyper.seed = c.seeds.train;
  read_field(j, "msm_dt", c.msm_dt);
  read_field(j, "msm_reset", c.msm_reset);
  if (j.contains("mnist")) {
    const json& s = j["mnist"];
    check_keys(s, "mnist.",
               {"train_images", "train_labels", "test_images", "test_labels", "n_train", "n_test"});
    read_field(s, "train_images", c.mnist.train_images);
    read_field(s, "train_labels", c.mnist.train_labels);
    read_field(s, "test_images", c.mnist.test_images);
    read_field(s, "test_labels", c.mnist.test_labels);
    read_field(s, "n_train", c.mnist.n_train);
    read_field(s, "n_test", c.mnist.n_test);
  }
  if (j.contains("series")) {
    const json& s = j["series"];
    check_keys(s, "series.", {"n_train", "n_test", "washout", "dt"});
    read_field(s, "n_train", c.series.n_train);
    read_field(s, "n_test", c.series.n_test);
    read_field(s, "washout", c.series.washout);
    read_field(s, "dt", c.series.dt);
  }
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    check_keys(s, "sweep.", {"amps", "widths", "n_train", "n_test"});
    read_field(s, "amps", c.sweep.amps);
    read_field(s, "widths", c.sweep.widths);
    read_field(s, "n_train", c.sweep.n_train);
    read_field(s, "n_test", c.sweep.n_test);
  }
  if (j.contains("simulate")) {
    const json& s = j["simulate"];
    check_keys(s, "simulate.", {"node", "pulses", "dt", "stride", "diameter"});
    read_field(s, "node", c.simulate.node);
    if (s.contains("pulses")) {
      c.simulate.pulses.clear();
      for (const json& p : s["pulses"]) {
        if (!p.is_array() || p.size() != 2)
          throw ConfigError("config: each pulse must be [amplitude, duration_ns]");
        c.simulate.pulses.push_back(Pulse{p[0].get<double>(), p[1].get<double>()});
      }
    }
    read_field(s, "dt", c.simulate.dt);
    read_field(s, "stride", c.simulate.stride);
    read_field(s, "diameter", c.simulate.diameter);
  }
  read_field(j, "gen_count", c.gen_count);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = 1;
  j["task"] = task_str(c.task);
  j["seeds"] = {{"data", c.seeds.data}, {"train", c.seeds.train}, {"test", c.seeds.test}};
  j["output_dir"] = c.output_dir;
  j["parallelism"] = c.parallelism;
  j["cache"] = {{"enabled", c.cache.enabled}, {"dir", c.cache.dir}};
  j["skyrmion"] = {{"track_length", c.skyrmion.track_length},
                   {"x_min", c.skyrmion.x_min},
                   {"x_max", c.skyrmion.x_max},
                   {"x_init", c.skyrmion.x_init},
                   {"w_end", c.skyrmion.w_end},
                   {"w_center", c.skyrmion.w_center},
                   {"w_sigma", c.skyrmion.w_sigma},
                   {"mu0", c.skyrmion.mu0},
                   {"u_edge", c.skyrmion.u_edge},
                   {"lambda_edge", c.skyrmion.lambda_edge},
                   {"u_c", c.skyrmion.u_c},
                   {"sigma_c", c.skyrmion.sigma_c}};
  if (c.bank) {
    json bank = json::array();
    for (const DriveConfig& e : c.bank->configs)
      bank.push_back({{"node_id", e.node_id},
                      {"diameter", e.diameter},
                      {"i_offset", e.i_offset},
                      {"gain", e.gain},
                      {"pulse_width", e.pulse_width}});
    j["bank"] = bank;
  } else {
    j["bank"] = nullptr;
  }
  j["operating_point"] = {{"amp_uA", c.operating_point.amp_uA},
                          {"width_ns", c.operating_point.width_ns}};
  j["encoding"] = {
      {"scan_order", c.encoding.scan_order == ScanOrder::row_major ? "row_major" : "column_major"},
      {"threshold", c.encoding.threshold}};
  j["classifier"] = {{"learning_rate", c.classifier_hyper.learning_rate},
                     {"epochs", c.classifier_hyper.epochs},
                     {"batch_size", c.classifier_hyper.batch_size},
                     {"l2", c.classifier_hyper.l2},
                     {"loss", c.classifier_hyper.loss == ClassifierLoss::softmax ? "softmax"
                                                                                 : "one_vs_all"}};
  j["regressor"] = {{"learning_rate", c.regressor_hyper.learning_rate},
                    {"epochs", c.regressor_hyper.epochs},
                    {"batch_size", c.regressor_hyper.batch_size},
                    {"l2", c.regressor_hyper.l2}};
  j["msm_dt"] = c.msm_dt;
  j["msm_reset"] = c.msm_reset;
  j["mnist"] = {{"train_images", c.mnist.train_images},
                {"train_labels", c.mnist.train_labels},
                {"test_images", c.mnist.test_images},
                {"test_labels", c.mnist.test_labels},
                {"n_train", c.mnist.n_train},
                {"n_test", c.mnist.n_test}};
  j["series"] = {{"n_train", c.series.n_train},
                 {"n_test", c.series.n_test},
                 {"washout", c.series.washout},
                 {"dt", c.series.dt}};
  json pulses = json::array();
  for (const Pulse& p : c.simulate.pulses) pulses.push_back({p.amplitude, p.duration_ns});
  j["simulate"] = {{"node", c.simulate.node},
                   {"pulses", pulses},
                   {"dt", c.simulate.dt},
                   {"stride", c.simulate.stride},
                   {"diameter", c.simulate.diameter}};
  j["sweep"] = {{"amps", c.sweep.amps},
                {"widths", c.sweep.widths},
                {"n_train", c.sweep.n_train},
                {"n_test", c.sweep.n_test}};
  j["gen_count"] = c.gen_count;
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& config) {
  return hash_hex(fnv1a64(config_to_json(config)));
}

}  // namespace spinrc
