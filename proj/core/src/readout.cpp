#include "spinrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "spinrc/errors.hpp"
#include "spinrc/rng.hpp"

namespace spinrc {

namespace {

constexpr int kNumClasses = 10;

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorMatrix> as_matrix(const FeatureMatrix& f) {
  return {f.values.data(), static_cast<Eigen::Index>(f.rows), static_cast<Eigen::Index>(f.cols)};
}

inline double softplus(double z) {
  // log(1 + e^z), stable for large |z|
  if (z > 30.0) return z;
  if (z < -30.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

Eigen::MatrixXd one_hot(std::span<const int> labels) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), kNumClasses);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= kNumClasses)
      throw OutOfRange("classifier labels must lie in 0..9");
    t(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return t;
}

void check_predict_shape(const ReadoutModel& model, const FeatureMatrix& features) {
  if (static_cast<Eigen::Index>(features.cols) != model.weights.rows())
    throw ShapeMismatch("feature count does not match model weight rows");
}

// Row-wise softmax computed against the row maximum for stability.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& z) {
  Eigen::VectorXd zmax = z.rowwise().maxCoeff();
  Eigen::MatrixXd e = (z.colwise() - zmax).array().exp();
  Eigen::VectorXd denom = e.rowwise().sum();
  return e.array().colwise() / denom.array();
}

}  // namespace

void TrainHyper::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (l2 < 0.0) throw ConfigError("train: l2 must be >= 0");
}

double classifier_loss(const ReadoutModel& model, const FeatureMatrix& features,
                       std::span<const int> labels, double l2, ClassifierLoss loss_kind) {
  check_predict_shape(model, features);
  if (features.rows != labels.size()) throw ShapeMismatch("labels length != feature rows");
  auto x = as_matrix(features);
  Eigen::MatrixXd z = (x * model.weights).rowwise() + model.bias.transpose();
  Eigen::MatrixXd t = one_hot(labels);
  double loss = 0.0;
  if (loss_kind == ClassifierLoss::one_vs_all) {
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      for (Eigen::Index c = 0; c < z.cols(); ++c) loss += softplus(z(i, c)) - t(i, c) * z(i, c);
  } else {
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      double zmax = z.row(i).maxCoeff();
      double lse = zmax + std::log((z.row(i).array() - zmax).exp().sum());
      loss += lse - z(i, labels[static_cast<std::size_t>(i)]);
    }
  }
  loss /= static_cast<double>(features.rows);
  loss += 0.5 * l2 * model.weights.squaredNorm();
  return loss;
}

double regressor_loss(const ReadoutModel& model, const FeatureMatrix& features,
                      std::span<const double> targets, double l2) {
  check_predict_shape(model, features);
  if (features.rows != targets.size()) throw ShapeMismatch("targets length != feature rows");
  auto x = as_matrix(features);
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
  Eigen::VectorXd r = x * model.weights.col(0);
  r.array() += model.bias(0);
  r -= y;
  return r.squaredNorm() / static_cast<double>(features.rows) +
         l2 * model.weights.col(0).squaredNorm();
}

Gradient loss_gradient(const ReadoutModel& model, const FeatureMatrix& features,
                       std::span<const int> labels, double l2, ClassifierLoss loss_kind) {
  check_predict_shape(model, features);
  if (features.rows != labels.size()) throw ShapeMismatch("labels length != feature rows");
  auto x = as_matrix(features);
  Eigen::MatrixXd z = (x * model.weights).rowwise() + model.bias.transpose();
  Eigen::MatrixXd act = loss_kind == ClassifierLoss::one_vs_all
                            ? Eigen::MatrixXd(1.0 / (1.0 + (-z.array()).exp()))
                            : softmax_rows(z);
  Eigen::MatrixXd dz = (act - one_hot(labels)) / static_cast<double>(features.rows);
  Gradient g;
  g.dW = x.transpose() * dz + l2 * model.weights;
  g.db = dz.colwise().sum().transpose();
  return g;
}

Gradient loss_gradient(const ReadoutModel& model, const FeatureMatrix& features,
                       std::span<const double> targets, double l2) {
  check_predict_shape(model, features);
  if (features.rows != targets.size()) throw ShapeMismatch("targets length != feature rows");
  auto x = as_matrix(features);
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), static_cast<Eigen::Index>(targets.size()));
  Eigen::VectorXd r = x * model.weights.col(0);
  r.array() += model.bias(0);
  r -= y;
  double scale = 2.0 / static_cast<double>(features.rows);
  Gradient g;
  g.dW = scale * (x.transpose() * r) + 2.0 * l2 * model.weights.col(0);
  g.db = Eigen::VectorXd::Constant(1, scale * r.sum());
  return g;
}

TrainResult train_classifier_gd(const FeatureMatrix& features, std::span<const int> labels,
                                const TrainHyper& hyper) {
  hyper.validate();
  if (features.rows != labels.size()) throw ShapeMismatch("labels length != feature rows");
  if (features.rows == 0) throw BadLength("classifier training needs at least one sample");
  const auto n = static_cast<Eigen::Index>(features.rows);
  const auto nf = static_cast<Eigen::Index>(features.cols);
  auto x = as_matrix(features);
  Eigen::MatrixXd t = one_hot(labels);

  ReadoutModel model;
  model.kind = ModelKind::classifier;
  model.weights = Eigen::MatrixXd::Zero(nf, kNumClasses);
  model.bias = Eigen::VectorXd::Zero(kNumClasses);
  model.feature_meta = features.col_meta;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    Pcg32 rng(combine_seed(hyper.seed, static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = rng.next_below(static_cast<std::uint32_t>(i));
      std::swap(order[i - 1], order[j]);
    }
    for (Eigen::Index start = 0; start < n; start += hyper.batch_size) {
      Eigen::Index count = std::min<Eigen::Index>(hyper.batch_size, n - start);
      Eigen::MatrixXd xb(count, nf);
      Eigen::MatrixXd tb(count, kNumClasses);
      for (Eigen::Index r = 0; r < count; ++r) {
        Eigen::Index src = order[static_cast<std::size_t>(start + r)];
        xb.row(r) = x.row(src);
        tb.row(r) = t.row(src);
      }
      Eigen::MatrixXd z = (xb * model.weights).rowwise() + model.bias.transpose();
      Eigen::MatrixXd act = hyper.loss == ClassifierLoss::one_vs_all
                                ? Eigen::MatrixXd(1.0 / (1.0 + (-z.array()).exp()))
                                : softmax_rows(z);
      Eigen::MatrixXd dz = (act - tb) / static_cast<double>(count);
      model.weights -= hyper.learning_rate * (xb.transpose() * dz + hyper.l2 * model.weights);
      model.bias -= hyper.learning_rate * dz.colwise().sum().transpose();
    }
    if (!model.weights.allFinite() || !model.bias.allFinite())
      throw NonFinite("classifier training diverged (non-finite weights); lower the learning rate");
  }
  double loss = classifier_loss(model, features, labels, hyper.l2, hyper.loss);
  if (!std::isfinite(loss))
    throw NonFinite("classifier training diverged (non-finite loss); lower the learning rate");
  return {std::move(model), loss};
}

TrainResult train_regressor_gd(const FeatureMatrix& features, std::span<const double> targets,
                               const TrainHyper& hyper) {
  hyper.validate();
  if (features.rows != targets.size()) throw ShapeMismatch("targets length != feature rows");
  const auto n = static_cast<Eigen::Index>(features.rows);
  const auto nf = static_cast<Eigen::Index>(features.cols);
  if (n <= nf) throw ShapeMismatch("regressor training needs more rows than parameters");
  auto x = as_matrix(features);
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);

  // Standardize columns so steepest descent sees a reasonably conditioned
  // quadratic; the objective is mapped back exactly afterwards.
  Eigen::VectorXd mean = x.colwise().mean();
  Eigen::VectorXd scale(nf);
  for (Eigen::Index j = 0; j < nf; ++j) {
    double var = (x.col(j).array() - mean(j)).square().mean();
    scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  Eigen::MatrixXd xs = (x.rowwise() - mean.transpose()).array().rowwise() /
                       scale.transpose().array();
  double ybar = y.mean();

  // Quadratic in the scaled weights: loss(w) = w' (G/2) w - c' w + const with
  // G = 2 (Xs'Xs/n + diag(l2/scale^2)) and c = 2 Xs'(y - ybar)/n. The
  // centered bias is optimal at ybar independently of w.
  Eigen::MatrixXd gram = (2.0 / static_cast<double>(n)) * (xs.transpose() * xs);
  for (Eigen::Index j = 0; j < nf; ++j) gram(j, j) += 2.0 * hyper.l2 / (scale(j) * scale(j));
  Eigen::VectorXd c = (2.0 / static_cast<double>(n)) * (xs.transpose() * (y.array() - ybar).matrix());

  Eigen::VectorXd w = Eigen::VectorXd::Zero(nf);
  for (int iter = 0; iter < hyper.epochs; ++iter) {
    Eigen::VectorXd g = gram * w - c;
    double gg = g.squaredNorm();
    if (gg < 1e-28) break;
    double curvature = g.dot(gram * g);
    if (!(curvature > 0.0)) break;
    w -= (gg / curvature) * g;  // exact line search on the quadratic
    if (!w.allFinite()) throw NonFinite("regressor training diverged");
  }

  ReadoutModel model;
  model.kind = ModelKind::regressor;
  model.weights = (w.array() / scale.array()).matrix();
  model.weights.resize(nf, 1);
  model.bias = Eigen::VectorXd::Constant(1, ybar - model.weights.col(0).dot(mean));
  model.feature_meta = features.col_meta;
  double loss = regressor_loss(model, features, targets, hyper.l2);
  if (!std::isfinite(loss)) throw NonFinite("regressor training produced non-finite loss");
  return {std::move(model), loss};
}

ReadoutModel solve_least_squares(const FeatureMatrix& features, std::span<const double> targets,
                                 double l2) {
  if (features.rows != targets.size()) throw ShapeMismatch("targets length != feature rows");
  const auto n = static_cast<Eigen::Index>(features.rows);
  const auto nf = static_cast<Eigen::Index>(features.cols);
  if (n <= nf) throw ShapeMismatch("least squares needs more rows than parameters");
  if (l2 < 0.0) throw ConfigError("least squares: l2 must be >= 0");
  auto x = as_matrix(features);
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);

  Eigen::MatrixXd a(n, nf + 1);
  a.leftCols(nf) = x;
  a.col(nf).setOnes();

  Eigen::VectorXd theta;
  if (l2 == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < nf + 1)
      throw Singular("least squares: feature matrix is rank-deficient and l2 = 0");
    theta = qr.solve(y);
  } else {
    Eigen::MatrixXd m = (a.transpose() * a) / static_cast<double>(n);
    for (Eigen::Index j = 0; j < nf; ++j) m(j, j) += l2;  // bias unpenalized
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success)
      throw Singular("least squares: normal equations not solvable");
    theta = ldlt.solve((a.transpose() * y) / static_cast<double>(n));
  }

  ReadoutModel model;
  model.kind = ModelKind::regressor;
  model.weights = theta.head(nf);
  model.weights.resize(nf, 1);
  model.bias = Eigen::VectorXd::Constant(1, theta(nf));
  model.feature_meta = features.col_meta;
  return model;
}

std::vector<int> predict_class(const ReadoutModel& model, const FeatureMatrix& features) {
  if (model.kind != ModelKind::classifier)
    throw ShapeMismatch("predict_class requires a classifier model");
  check_predict_shape(model, features);
  auto x = as_matrix(features);
  Eigen::MatrixXd z = (x * model.weights).rowwise() + model.bias.transpose();
  std::vector<int> labels(features.rows);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c)
      if (z(i, c) > z(i, best)) best = c;  // ties break toward the smaller digit
    labels[static_cast<std::size_t>(i)] = best;
  }
  return labels;
}

std::vector<double> predict_series(const ReadoutModel& model, const FeatureMatrix& features) {
  if (model.kind != ModelKind::regressor)
    throw ShapeMismatch("predict_series requires a regressor model");
  check_predict_shape(model, features);
  auto x = as_matrix(features);
  Eigen::VectorXd yhat = x * model.weights.col(0);
  yhat.array() += model.bias(0);
  return {yhat.data(), yhat.data() + yhat.size()};
}

std::string model_to_json(const ReadoutModel& model) {
  nlohmann::json j;
  j["kind"] = model.kind == ModelKind::classifier ? "classifier" : "regressor";
  j["rows"] = model.weights.rows();
  j["cols"] = model.weights.cols();
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(model.weights.size()));
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c) w.push_back(model.weights(r, c));
  j["weights"] = w;
  j["bias"] = std::vector<double>(model.bias.data(), model.bias.data() + model.bias.size());
  j["feature_meta"] = model.feature_meta;
  return j.dump(2);
}

ReadoutModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ReadoutModel model;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "classifier")
    model.kind = ModelKind::classifier;
  else if (kind == "regressor")
    model.kind = ModelKind::regressor;
  else
    throw DataError("model json: unknown kind '" + kind + "'");
  auto rows = j.at("rows").get<Eigen::Index>();
  auto cols = j.at("cols").get<Eigen::Index>();
  auto w = j.at("weights").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(w.size()) != rows * cols)
    throw ShapeMismatch("model json: weights size != rows*cols");
  model.weights.resize(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      model.weights(r, c) = w[static_cast<std::size_t>(r * cols + c)];
  auto b = j.at("bias").get<std::vector<double>>();
  model.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  if (j.contains("feature_meta")) model.feature_meta = j["feature_meta"].get<std::vector<int>>();
  return model;
}

}  // namespace spinrc
