#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spinrc {

enum class TaskId { second_order, narma10 };

std::string task_name(TaskId id);
TaskId task_from_name(const std::string& name);

// i.i.d. uniform values in [0, 0.5] from PCG32 (see rng.hpp for the exact
// generator constants); identical for a given seed on every platform.
std::vector<double> gen_uniform_input(std::size_t n, std::uint64_t seed);

// y(k) = 0.4 y(k-1) + 0.4 y(k-1) y(k-2) + 0.6 u(k)^3 + 0.1, with
// y(-1) = y(0) = 0 and k starting at 1; element i of the result is y(i+1).
std::vector<double> gen_second_order(std::span<const double> u);

// y(k) = 0.3 y(k-1) + 0.05 y(k-1) sum_{i=1..10} y(k-i) + 1.5 u(k-1) u(k-10)
// + 0.1, with y(k) = 0 for k <= 10 and pre-start u treated as 0. Throws
// Diverged if any |y| exceeds 1.
std::vector<double> gen_narma10(std::span<const double> u);

struct SeriesDataset {
  TaskId task = TaskId::second_order;
  std::vector<double> u;
  std::vector<double> y;
  std::uint64_t seed = 0;
  int generation_attempts = 1;  // > 1 when earlier seeds diverged
};

// Seeded dataset with the regenerate-on-divergence policy: if the recurrence
// diverges, the seed is incremented and the draw repeated.
SeriesDataset make_series_dataset(TaskId task, std::size_t n, std::uint64_t seed,
                                  int max_attempts = 50);

// Training set is a prefix of `dataset`; the test set is freshly generated
// from test_seed (which must differ from the training seed).
std::pair<SeriesDataset, SeriesDataset> split_series(const SeriesDataset& dataset,
                                                     std::size_t train_len,
                                                     std::uint64_t test_seed,
                                                     std::size_t test_len = 800);

// ---- metrics ----

double accuracy(std::span<const int> pred, std::span<const int> truth);

using ConfusionMatrix = std::array<std::array<int, 10>, 10>;  // [truth][pred]
ConfusionMatrix confusion_matrix(std::span<const int> pred, std::span<const int> truth);

// mean((y - yhat)^2) / population-variance(y); a constant predictor at
// mean(y) scores exactly 1.
double nmse(std::span<const double> y, std::span<const double> yhat);
double nrmse(std::span<const double> y, std::span<const double> yhat);

// ---- image datasets ----

struct ImageDataset {
  std::size_t count = 0;
  std::vector<std::uint8_t> pixels;  // count * 784, row-major 28x28
  std::vector<int> labels;

  std::span<const std::uint8_t> image(std::size_t i) const {
    return {pixels.data() + i * 784, 784};
  }
};

// IDX binary format: big-endian magic (0x00000803 images / 0x00000801
// labels), big-endian dimension sizes, unsigned-byte payload.
ImageDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path);
void write_mnist_idx(const ImageDataset& dataset, const std::string& images_path,
                     const std::string& labels_path);

// Deterministic synthetic handwritten-digit set in the same 28x28 format:
// stroke templates per digit with seeded affine jitter, thickness variation
// and pixel noise. Stands in when the real MNIST files are not on disk.
ImageDataset synth_digits(std::size_t n, std::uint64_t seed);

}  // namespace spinrc
