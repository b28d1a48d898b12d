#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include <doctest.h>

#include "spinrc/errors.hpp"
#include "spinrc/tasks.hpp"

using namespace spinrc;
namespace fs = std::filesystem;

namespace {

// Independent reference recurrences, deliberately written as plain loops that
// share no code with the library implementations.
std::vector<double> oracle_second_order(const std::vector<double>& u) {
  std::vector<double> y;
  y.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    double ym1 = y.size() >= 1 ? y[y.size() - 1] : 0.0;
    double ym2 = y.size() >= 2 ? y[y.size() - 2] : 0.0;
    double cube = u[k] * u[k] * u[k];
    y.push_back(0.4 * ym1 + 0.4 * ym1 * ym2 + 0.6 * cube + 0.1);
  }
  return y;
}

// Returns false if the recurrence leaves [-1, 1].
bool oracle_narma10(const std::vector<double>& u, std::vector<double>& y) {
  const std::size_t n = u.size();
  y.assign(n, 0.0);
  for (std::size_t i = 10; i < n; ++i) {
    // Summed most-recent-first; exact agreement requires the documented order.
    double acc = 0.0;
    for (std::size_t lag = 1; lag <= 10; ++lag) acc += y[i - lag];
    double val = 0.3 * y[i - 1] + 0.05 * y[i - 1] * acc + 1.5 * u[i - 1] * u[i - 10] + 0.1;
    if (std::fabs(val) > 1.0) return false;
    y[i] = val;
  }
  return true;
}

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "spinrc_tasks_test";
  fs::create_directories(dir);
  return dir;
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void push_be32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(static_cast<std::uint8_t>(x >> 24));
  v.push_back(static_cast<std::uint8_t>(x >> 16));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
  v.push_back(static_cast<std::uint8_t>(x));
}

std::vector<std::uint8_t> idx_images(std::uint32_t count, std::uint32_t rows = 28,
                                     std::uint32_t cols = 28) {
  std::vector<std::uint8_t> bytes;
  push_be32(bytes, 0x00000803);
  push_be32(bytes, count);
  push_be32(bytes, rows);
  push_be32(bytes, cols);
  for (std::uint32_t i = 0; i < count * rows * cols; ++i)
    bytes.push_back(static_cast<std::uint8_t>(i % 251));
  return bytes;
}

std::vector<std::uint8_t> idx_labels(const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> bytes;
  push_be32(bytes, 0x00000801);
  push_be32(bytes, static_cast<std::uint32_t>(labels.size()));
  bytes.insert(bytes.end(), labels.begin(), labels.end());
  return bytes;
}

}  // namespace

TEST_CASE("tasks: uniform input generator") {
  std::vector<double> u = gen_uniform_input(800, 11);
  REQUIRE(u.size() == 800);
  for (double v : u) {
    CHECK(v >= 0.0);
    CHECK(v < 0.5);
  }
  CHECK(gen_uniform_input(800, 11) == u);
  CHECK(gen_uniform_input(800, 12) != u);
  CHECK_THROWS_AS(gen_uniform_input(0, 1), BadLength);
}

TEST_CASE("tasks: second-order hand values and fixed points") {
  SUBCASE("u identically zero") {
    std::vector<double> u(500, 0.0);
    std::vector<double> y = gen_second_order(u);
    CHECK(y[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(0.14).epsilon(1e-15));
    CHECK(y[2] == doctest::Approx(0.1616).epsilon(1e-15));
    CHECK(y.back() == doctest::Approx(0.19098).epsilon(1e-4));
  }
  SUBCASE("u identically 0.5") {
    std::vector<double> u(500, 0.5);
    std::vector<double> y = gen_second_order(u);
    CHECK(y.back() == doctest::Approx(0.39645).epsilon(1e-4));
  }
}

TEST_CASE("tasks: NARMA10 hand values and divergence behavior") {
  SUBCASE("u identically zero") {
    std::vector<double> u(50, 0.0);
    std::vector<double> y = gen_narma10(u);
    for (int k = 0; k < 10; ++k) CHECK(y[static_cast<std::size_t>(k)] == 0.0);
    CHECK(y[10] == doctest::Approx(0.1).epsilon(1e-15));   // y(11)
    CHECK(y[11] == doctest::Approx(0.1305).epsilon(1e-15));  // y(12)
  }
  SUBCASE("u identically 0.5 diverges") {
    std::vector<double> u(800, 0.5);
    CHECK_THROWS_AS(gen_narma10(u), Diverged);
  }
  SUBCASE("too-short input rejected") {
    std::vector<double> u(5, 0.1);
    CHECK_THROWS_AS(gen_narma10(u), BadLength);
  }
}

TEST_CASE("tasks: generators match the independent oracle over 100 seeds") {
  int narma_divergences = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::vector<double> u = gen_uniform_input(800, seed);

    std::vector<double> so = gen_second_order(u);
    std::vector<double> so_ref = oracle_second_order(u);
    REQUIRE(so.size() == so_ref.size());
    for (std::size_t k = 0; k < so.size(); ++k) CHECK(so[k] == so_ref[k]);

    std::vector<double> na_ref;
    bool ok = oracle_narma10(u, na_ref);
    if (!ok) {
      ++narma_divergences;
      CHECK_THROWS_AS(gen_narma10(u), Diverged);
      continue;
    }
    std::vector<double> na = gen_narma10(u);
    for (std::size_t k = 0; k < na.size(); ++k) CHECK(na[k] == na_ref[k]);
  }
  CHECK(narma_divergences < 5);  // < 5% over 100 seeds
}

TEST_CASE("tasks: dataset construction and boundedness") {
  for (TaskId task : {TaskId::second_order, TaskId::narma10}) {
    SeriesDataset d = make_series_dataset(task, 800, 3);
    CHECK(d.u.size() == 800);
    CHECK(d.y.size() == 800);
    CHECK(d.generation_attempts >= 1);
    for (double v : d.y) CHECK(std::fabs(v) <= 1.0);
    if (task == TaskId::second_order)
      for (double v : d.y) {
        CHECK(v > 0.0);
        CHECK(v < 1.0);
      }
  }
}

TEST_CASE("tasks: split_series") {
  SeriesDataset d = make_series_dataset(TaskId::second_order, 800, 3);
  auto [train, test] = split_series(d, 600, 4, 300);
  CHECK(train.u.size() == 600);
  CHECK(test.u.size() == 300);
  for (std::size_t k = 0; k < 600; ++k) {
    CHECK(train.u[k] == d.u[k]);
    CHECK(train.y[k] == d.y[k]);
  }
  // Test targets obey the recurrence for the freshly drawn input.
  CHECK(test.y == gen_second_order(test.u));
  CHECK_THROWS_AS(split_series(d, 600, d.seed, 300), IndependenceViolation);
  CHECK_THROWS_AS(split_series(d, 900, 5, 300), OutOfRange);
}

TEST_CASE("tasks: metric definitions") {
  std::vector<double> y{0.1, 0.5, 0.2, 0.9, 0.4};
  SUBCASE("perfect prediction") {
    CHECK(nmse(y, y) == 0.0);
    CHECK(nrmse(y, y) == 0.0);
  }
  SUBCASE("constant mean predictor scores exactly 1") {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    std::vector<double> yhat(y.size(), mean);
    CHECK(nmse(y, yhat) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nrmse(y, yhat) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("nrmse squared equals nmse") {
    std::vector<double> yhat{0.2, 0.4, 0.3, 0.7, 0.35};
    double a = nrmse(y, yhat);
    double b = nmse(y, yhat);
    CHECK(a * a == doctest::Approx(b).epsilon(1e-12));
  }
  SUBCASE("zero variance rejected") {
    std::vector<double> flat(5, 0.3);
    std::vector<double> yhat(5, 0.0);
    CHECK_THROWS_AS(nmse(flat, yhat), ZeroVariance);
  }
  SUBCASE("length mismatch rejected") {
    std::vector<double> yhat{0.1};
    CHECK_THROWS_AS(nmse(y, yhat), ShapeMismatch);
  }
}

TEST_CASE("tasks: accuracy and confusion matrix") {
  std::vector<int> truth{0, 1, 2, 2, 9};
  std::vector<int> pred{0, 1, 2, 3, 9};
  CHECK(accuracy(pred, truth) == doctest::Approx(0.8));
  CHECK(accuracy(truth, truth) == 1.0);
  ConfusionMatrix cm = confusion_matrix(pred, truth);
  CHECK(cm[2][2] == 1);
  CHECK(cm[2][3] == 1);
  int trace = 0, total = 0;
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) {
      if (r == c) trace += cm[r][c];
      total += cm[r][c];
    }
  CHECK(trace == 4);
  CHECK(total == 5);
  // Row sums equal per-class truth counts.
  int row2 = 0;
  for (int c = 0; c < 10; ++c) row2 += cm[2][c];
  CHECK(row2 == 2);
}

TEST_CASE("tasks: IDX loader on a hand-built fixture") {
  fs::path dir = temp_dir();
  fs::path img_path = dir / "fixture-images";
  fs::path lab_path = dir / "fixture-labels";
  write_bytes(img_path, idx_images(2));
  write_bytes(lab_path, idx_labels({3, 7}));

  ImageDataset d = load_mnist_idx(img_path.string(), lab_path.string());
  CHECK(d.count == 2);
  CHECK(d.labels == std::vector<int>{3, 7});
  // Payload is read in row-major order.
  CHECK(d.pixels[0] == 0);
  CHECK(d.pixels[1] == 1);
  CHECK(d.pixels[250] == 250);
  CHECK(d.image(1)[0] == static_cast<std::uint8_t>(784 % 251));
}

TEST_CASE("tasks: IDX loader error taxonomy") {
  fs::path dir = temp_dir();
  fs::path img_path = dir / "err-images";
  fs::path lab_path = dir / "err-labels";

  SUBCASE("wrong magic") {
    write_bytes(img_path, idx_labels({1, 2}));  // labels magic in the images slot
    write_bytes(lab_path, idx_labels({1, 2}));
    CHECK_THROWS_AS(load_mnist_idx(img_path.string(), lab_path.string()), BadMagic);
  }
  SUBCASE("count mismatch") {
    write_bytes(img_path, idx_images(2));
    write_bytes(lab_path, idx_labels({1, 2, 3}));
    CHECK_THROWS_AS(load_mnist_idx(img_path.string(), lab_path.string()), CountMismatch);
  }
  SUBCASE("truncated payload") {
    std::vector<std::uint8_t> bytes = idx_images(2);
    bytes.resize(bytes.size() - 100);
    write_bytes(img_path, bytes);
    write_bytes(lab_path, idx_labels({1, 2}));
    CHECK_THROWS_AS(load_mnist_idx(img_path.string(), lab_path.string()), TruncatedFile);
  }
  SUBCASE("wrong dimensions") {
    write_bytes(img_path, idx_images(2, 27, 28));
    write_bytes(lab_path, idx_labels({1, 2}));
    CHECK_THROWS_AS(load_mnist_idx(img_path.string(), lab_path.string()), DimensionMismatch);
  }
}

TEST_CASE("tasks: IDX write/read round-trip") {
  fs::path dir = temp_dir();
  ImageDataset d = synth_digits(25, 5);
  fs::path img_path = dir / "rt-images";
  fs::path lab_path = dir / "rt-labels";
  write_mnist_idx(d, img_path.string(), lab_path.string());
  ImageDataset back = load_mnist_idx(img_path.string(), lab_path.string());
  CHECK(back.count == d.count);
  CHECK(back.pixels == d.pixels);
  CHECK(back.labels == d.labels);
}

TEST_CASE("tasks: synthetic digit set") {
  ImageDataset a = synth_digits(100, 9);
  ImageDataset b = synth_digits(100, 9);
  CHECK(a.pixels == b.pixels);
  CHECK(a.labels == b.labels);
  CHECK(a.count == 100);
  bool all_classes = true;
  for (int digit = 0; digit < 10; ++digit) {
    bool found = false;
    for (int l : a.labels) found = found || (l == digit);
    all_classes = all_classes && found;
  }
  CHECK(all_classes);
  CHECK(synth_digits(100, 10).pixels != a.pixels);
}

TEST_CASE("tasks: task names") {
  CHECK(task_name(TaskId::second_order) == "second_order");
  CHECK(task_name(TaskId::narma10) == "narma10");
  CHECK(task_from_name("narma10") == TaskId::narma10);
  CHECK_THROWS_AS(task_from_name("mnist3"), ConfigError);
}
