// spinrc: experiment harness CLI.
//
// Subcommands:
//   run <task>   full pipeline (mnist | second_order | narma10)
//   sweep        operating-point grid over the desk-scale MNIST pipeline
//   simulate     scripted pulse train through a single node -> trace CSV
//   gen-data     materialize the seeded dataset for offline inspection
//
// Exit codes: 0 ok, 1 unexpected, 2 config error, 3 data error,
// 4 numerical error. Diagnostics are a single stderr line.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinrc/errors.hpp"
#include "spinrc/experiment.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallelism;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (defaults apply when omitted)");
  cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", o.seed,
                  "base seed; sets data/train/test to seed, seed+1, seed+2");
  cmd->add_option("--parallelism", o.parallelism, "worker thread count (overrides config)")
      ->check(CLI::PositiveNumber);
}

spinrc::ExperimentConfig make_config(const CommonOpts& o) {
  spinrc::ExperimentConfig c;
  if (!o.config_path.empty()) c = spinrc::load_config(o.config_path);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (o.seed) {
    c.seeds.data = *o.seed;
    c.seeds.train = *o.seed + 1;
    c.seeds.test = *o.seed + 2;
  }
  if (o.parallelism) c.parallelism = *o.parallelism;
  return c;
}

spinrc::ExperimentTask parse_run_task(const std::string& name) {
  if (name == "mnist") return spinrc::ExperimentTask::mnist;
  if (name == "second_order") return spinrc::ExperimentTask::second_order;
  if (name == "narma10") return spinrc::ExperimentTask::narma10;
  throw spinrc::ConfigError("unknown task '" + name + "' (mnist | second_order | narma10)");
}

void print_report(const spinrc::MetricsReport& r) {
  std::printf("task=%s config=%s n_train=%zu n_test=%zu", r.task.c_str(), r.config_hash.c_str(),
              r.n_train, r.n_test);
  if (r.accuracy) std::printf(" accuracy=%.4f", *r.accuracy);
  if (r.nmse_test) std::printf(" nmse_train=%.6g nmse_test=%.6g", *r.nmse_train, *r.nmse_test);
  if (r.nrmse_test)
    std::printf(" nrmse_train=%.6g nrmse_test=%.6g", *r.nrmse_train, *r.nrmse_test);
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spintronic reservoir-computing experiment harness"};
  app.require_subcommand(1);

  std::string run_task;
  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "full encode/reservoir/train/evaluate pipeline");
  run->add_option("task", run_task, "mnist | second_order | narma10")->required();
  add_common(run, run_opts);

  CommonOpts sweep_opts;
  std::vector<double> sweep_amps, sweep_widths;
  CLI::App* sweep = app.add_subcommand("sweep", "pulse amplitude/width grid (MNIST desk scale)");
  add_common(sweep, sweep_opts);
  sweep->add_option("--amp", sweep_amps, "pulse amplitudes, uA (overrides config grid)");
  sweep->add_option("--width", sweep_widths, "pulse widths, ns (overrides config grid)");

  CommonOpts sim_opts;
  std::string sim_node;
  std::vector<std::string> sim_pulses;
  double sim_dt = 0.0;
  int sim_stride = 0, sim_diameter = 0;
  CLI::App* sim = app.add_subcommand("simulate", "single-node pulse-train trace");
  add_common(sim, sim_opts);
  sim->add_option("--node", sim_node, "msm | stno (overrides config)");
  sim->add_option("--pulse", sim_pulses, "pulse as amplitude:width_ns (repeatable)");
  sim->add_option("--dt", sim_dt, "integrator step, ns (0 = node default)");
  sim->add_option("--stride", sim_stride, "sample every Nth substep")->check(CLI::PositiveNumber);
  sim->add_option("--diameter", sim_diameter, "STNO diameter, nm");

  CommonOpts gen_opts;
  std::string gen_task;
  std::size_t gen_count = 0;
  CLI::App* gen = app.add_subcommand("gen-data", "write the seeded dataset to disk");
  gen->add_option("task", gen_task, "mnist | second_order | narma10")->required();
  add_common(gen, gen_opts);
  gen->add_option("--count", gen_count, "sample count")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      spinrc::ExperimentConfig c = make_config(run_opts);
      c.task = parse_run_task(run_task);
      print_report(spinrc::run_experiment(c));
    } else if (sweep->parsed()) {
      spinrc::ExperimentConfig c = make_config(sweep_opts);
      c.task = spinrc::ExperimentTask::sweep;
      if (!sweep_amps.empty()) c.sweep.amps = sweep_amps;
      if (!sweep_widths.empty()) c.sweep.widths = sweep_widths;
      for (const spinrc::SweepCell& cell : spinrc::run_sweep(c)) {
        if (cell.error.empty())
          std::printf("amp=%g width=%g accuracy=%.4f\n", cell.amp_uA, cell.width_ns,
                      cell.test_accuracy);
        else
          std::printf("amp=%g width=%g FAILED: %s\n", cell.amp_uA, cell.width_ns,
                      cell.error.c_str());
      }
    } else if (sim->parsed()) {
      spinrc::ExperimentConfig c = make_config(sim_opts);
      c.task = spinrc::ExperimentTask::simulate;
      if (!sim_node.empty()) c.simulate.node = sim_node;
      if (sim_dt > 0.0) c.simulate.dt = sim_dt;
      if (sim_stride > 0) c.simulate.stride = sim_stride;
      if (sim_diameter > 0) c.simulate.diameter = sim_diameter;
      if (!sim_pulses.empty()) {
        c.simulate.pulses.clear();
        for (const std::string& s : sim_pulses) {
          auto colon = s.find(':');
          if (colon == std::string::npos)
            throw spinrc::ConfigError("--pulse expects amplitude:width_ns, got '" + s + "'");
          try {
            c.simulate.pulses.push_back(
                {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))});
          } catch (const std::exception&) {
            throw spinrc::ConfigError("--pulse expects amplitude:width_ns, got '" + s + "'");
          }
        }
      }
      spinrc::simulate_node(c);
      std::printf("trace written to %s/trace.csv\n", c.output_dir.c_str());
    } else if (gen->parsed()) {
      spinrc::ExperimentConfig c = make_config(gen_opts);
      c.task = parse_run_task(gen_task);
      if (gen_count > 0) c.gen_count = gen_count;
      spinrc::gen_data(c);
      std::printf("dataset written to %s\n", c.output_dir.c_str());
    }
  } catch (const spinrc::ConfigError& e) {
    std::fprintf(stderr, "spinrc: config error: %s\n", e.what());
    return 2;
  } catch (const spinrc::DataError& e) {
    std::fprintf(stderr, "spinrc: data error: %s\n", e.what());
    return 3;
  } catch (const spinrc::NumericalError& e) {
    std::fprintf(stderr, "spinrc: numerical error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "spinrc: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
