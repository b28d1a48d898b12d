#include <cmath>

#include "spinrc/errors.hpp"
#include "spinrc/tasks.hpp"

namespace spinrc {

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) throw ShapeMismatch("accuracy: length mismatch");
  if (pred.empty()) throw BadLength("accuracy: empty input");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

ConfusionMatrix confusion_matrix(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size()) throw ShapeMismatch("confusion_matrix: length mismatch");
  ConfusionMatrix m{};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i] < 0 || truth[i] > 9 || pred[i] < 0 || pred[i] > 9)
      throw OutOfRange("confusion_matrix: labels must lie in 0..9");
    m[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])]++;
  }
  return m;
}

double nmse(std::span<const double> y, std::span<const double> yhat) {
  if (y.size() != yhat.size()) throw ShapeMismatch("nmse: length mismatch");
  if (y.empty()) throw BadLength("nmse: empty input");
  const double n = static_cast<double>(y.size());
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double var = 0.0;
  double mse = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    var += (y[i] - mean) * (y[i] - mean);
    mse += (y[i] - yhat[i]) * (y[i] - yhat[i]);
  }
  var /= n;
  mse /= n;
  if (var == 0.0) throw ZeroVariance("nmse: target variance is zero");
  return mse / var;
}

double nrmse(std::span<const double> y, std::span<const double> yhat) {
  return std::sqrt(nmse(y, yhat));
}

}  // namespace spinrc
