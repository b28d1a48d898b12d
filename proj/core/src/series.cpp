#include <cmath>

#include "spinrc/errors.hpp"
#include "spinrc/rng.hpp"
#include "spinrc/tasks.hpp"

namespace spinrc {

std::string task_name(TaskId id) {
  return id == TaskId::second_order ? "second_order" : "narma10";
}

TaskId task_from_name(const std::string& name) {
  if (name == "second_order") return TaskId::second_order;
  if (name == "narma10") return TaskId::narma10;
  throw ConfigError("unknown series task '" + name + "'");
}

std::vector<double> gen_uniform_input(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw BadLength("gen_uniform_input: n must be >= 1");
  Pcg32 rng(seed);
  std::vector<double> u(n);
  for (double& v : u) v = 0.5 * rng.next_double();
  return u;
}

std::vector<double> gen_second_order(std::span<const double> u) {
  std::vector<double> y(u.size());
  double y1 = 0.0;  // y(k-1)
  double y2 = 0.0;  // y(k-2)
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (!std::isfinite(u[k])) throw OutOfRange("gen_second_order: non-finite input");
    double yk = 0.4 * y1 + 0.4 * y1 * y2 + 0.6 * (u[k] * u[k] * u[k]) + 0.1;
    if (std::abs(yk) > 1.0) throw Diverged("second-order recurrence left [-1, 1]");
    y[k] = yk;
    y2 = y1;
    y1 = yk;
  }
  return y;
}

std::vector<double> gen_narma10(std::span<const double> u) {
  if (u.size() < 11) throw BadLength("gen_narma10: need at least 11 input points");
  const std::size_t n = u.size();
  std::vector<double> y(n, 0.0);
  // y[i] holds y(k = i+1); y(k) = 0 for k <= 10, so the first computed index
  // is i = 10. u(k - j) with k - j < 1 is treated as 0.
  for (std::size_t i = 10; i < n; ++i) {
    double sum10 = 0.0;
    for (std::size_t j = 1; j <= 10; ++j) sum10 += y[i - j];
    double u1 = u[i - 1];
    double u10 = u[i - 10];
    double yk = 0.3 * y[i - 1] + 0.05 * y[i - 1] * sum10 + 1.5 * u1 * u10 + 0.1;
    if (std::abs(yk) > 1.0) throw Diverged("NARMA10 recurrence left [-1, 1]");
    y[i] = yk;
  }
  return y;
}

SeriesDataset make_series_dataset(TaskId task, std::size_t n, std::uint64_t seed,
                                  int max_attempts) {
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::uint64_t s = seed + static_cast<std::uint64_t>(attempt - 1);
    std::vector<double> u = gen_uniform_input(n, s);
    try {
      std::vector<double> y =
          task == TaskId::second_order ? gen_second_order(u) : gen_narma10(u);
      SeriesDataset d;
      d.task = task;
      d.u = std::move(u);
      d.y = std::move(y);
      d.seed = s;
      d.generation_attempts = attempt;
      return d;
    } catch (const Diverged&) {
      // try the next seed
    }
  }
  throw Diverged("series generation diverged for " + std::to_string(max_attempts) +
                 " consecutive seeds");
}

std::pair<SeriesDataset, SeriesDataset> split_series(const SeriesDataset& dataset,
                                                     std::size_t train_len,
                                                     std::uint64_t test_seed,
                                                     std::size_t test_len) {
  if (train_len > dataset.u.size())
    throw OutOfRange("split_series: train_len exceeds dataset length");
  if (test_seed == dataset.seed)
    throw IndependenceViolation("split_series: test seed equals the training seed");
  SeriesDataset train;
  train.task = dataset.task;
  train.seed = dataset.seed;
  train.u.assign(dataset.u.begin(), dataset.u.begin() + static_cast<std::ptrdiff_t>(train_len));
  train.y.assign(dataset.y.begin(), dataset.y.begin() + static_cast<std::ptrdiff_t>(train_len));
  SeriesDataset test = make_series_dataset(dataset.task, test_len, test_seed);
  return {std::move(train), std::move(test)};
}

}  // namespace spinrc
