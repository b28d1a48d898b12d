#include <cmath>
#include <vector>

#include <doctest.h>

#include "spinrc/errors.hpp"
#include "spinrc/readout.hpp"
#include "spinrc/rng.hpp"
#include "spinrc/tasks.hpp"

using namespace spinrc;

namespace {

FeatureMatrix make_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Pcg32 rng(seed);
  FeatureMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.values.resize(rows * cols);
  for (double& v : m.values) v = 2.0 * rng.next_double() - 1.0;
  m.col_meta.resize(cols);
  for (std::size_t c = 0; c < cols; ++c) m.col_meta[c] = static_cast<int>(c);
  return m;
}

std::vector<int> random_labels(std::size_t n, std::uint64_t seed) {
  Pcg32 rng(seed);
  std::vector<int> labels(n);
  for (int& l : labels) l = static_cast<int>(rng.next_below(10));
  return labels;
}

ReadoutModel random_classifier(std::size_t features, std::uint64_t seed) {
  Pcg32 rng(seed);
  ReadoutModel m;
  m.kind = ModelKind::classifier;
  m.weights = Eigen::MatrixXd::NullaryExpr(
      static_cast<Eigen::Index>(features), 10,
      [&](Eigen::Index, Eigen::Index) { return rng.next_double() - 0.5; });
  m.bias = Eigen::VectorXd::NullaryExpr(10, [&](Eigen::Index) { return rng.next_double() - 0.5; });
  return m;
}

ReadoutModel random_regressor(std::size_t features, std::uint64_t seed) {
  Pcg32 rng(seed);
  ReadoutModel m;
  m.kind = ModelKind::regressor;
  m.weights = Eigen::MatrixXd::NullaryExpr(
      static_cast<Eigen::Index>(features), 1,
      [&](Eigen::Index, Eigen::Index) { return rng.next_double() - 0.5; });
  m.bias = Eigen::VectorXd::NullaryExpr(1, [&](Eigen::Index) { return rng.next_double() - 0.5; });
  return m;
}

// Central finite differences over every weight and bias entry; returns the
// norm of the difference relative to the norm of the gradient, which keeps
// floating-point noise on near-zero coordinates from dominating.
template <typename LossFn>
double max_fd_relative_error(ReadoutModel model, const Gradient& analytic, LossFn&& loss) {
  const double h = 1e-6;
  double diff_sq = 0.0;
  double norm_sq = 0.0;
  auto check = [&](double& param, double g) {
    double keep = param;
    param = keep + h;
    double up = loss(model);
    param = keep - h;
    double down = loss(model);
    param = keep;
    double fd = (up - down) / (2.0 * h);
    diff_sq += (fd - g) * (fd - g);
    norm_sq += g * g;
  };
  for (Eigen::Index r = 0; r < model.weights.rows(); ++r)
    for (Eigen::Index c = 0; c < model.weights.cols(); ++c)
      check(model.weights(r, c), analytic.dW(r, c));
  for (Eigen::Index c = 0; c < model.bias.size(); ++c) check(model.bias(c), analytic.db(c));
  return std::sqrt(diff_sq) / std::max(1e-12, std::sqrt(norm_sq));
}

}  // namespace

TEST_CASE("readout: classifier gradient matches central finite differences") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    FeatureMatrix f = make_features(12, 5, 1000 + trial);
    std::vector<int> labels = random_labels(12, 2000 + trial);
    ReadoutModel model = random_classifier(5, 3000 + trial);
    double l2 = (trial % 2) ? 1e-3 : 0.0;
    Gradient g = loss_gradient(model, f, labels, l2);
    double err = max_fd_relative_error(model, g, [&](const ReadoutModel& m) {
      return classifier_loss(m, f, labels, l2);
    });
    CHECK(err < 1e-5);
  }
}

TEST_CASE("readout: softmax gradient matches central finite differences") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    FeatureMatrix f = make_features(10, 4, 1500 + trial);
    std::vector<int> labels = random_labels(10, 2500 + trial);
    ReadoutModel model = random_classifier(4, 3500 + trial);
    Gradient g = loss_gradient(model, f, labels, 1e-4, ClassifierLoss::softmax);
    double err = max_fd_relative_error(model, g, [&](const ReadoutModel& m) {
      return classifier_loss(m, f, labels, 1e-4, ClassifierLoss::softmax);
    });
    CHECK(err < 1e-5);
  }
}

TEST_CASE("readout: regressor gradient matches central finite differences") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    FeatureMatrix f = make_features(15, 6, 4000 + trial);
    Pcg32 rng(5000 + trial);
    std::vector<double> y(15);
    for (double& v : y) v = rng.next_double();
    ReadoutModel model = random_regressor(6, 6000 + trial);
    double l2 = (trial % 2) ? 1e-2 : 0.0;
    Gradient g = loss_gradient(model, f, y, l2);
    double err = max_fd_relative_error(model, g, [&](const ReadoutModel& m) {
      return regressor_loss(m, f, std::span<const double>(y), l2);
    });
    CHECK(err < 1e-5);
  }
}

TEST_CASE("readout: gradient vanishes at the ridge minimizer") {
  FeatureMatrix f = make_features(60, 5, 77);
  Pcg32 rng(78);
  std::vector<double> y(60);
  for (double& v : y) v = rng.next_double();
  double l2 = 1e-3;
  ReadoutModel opt = solve_least_squares(f, y, l2);
  Gradient g = loss_gradient(opt, f, y, l2);
  CHECK(g.dW.norm() < 1e-8);
  CHECK(g.db.norm() < 1e-8);
}

TEST_CASE("readout: doubling residuals doubles the MSE gradient") {
  FeatureMatrix f = make_features(20, 3, 88);
  ReadoutModel zero;
  zero.kind = ModelKind::regressor;
  zero.weights = Eigen::MatrixXd::Zero(3, 1);
  zero.bias = Eigen::VectorXd::Zero(1);
  Pcg32 rng(89);
  std::vector<double> y(20), y2(20);
  for (std::size_t i = 0; i < 20; ++i) {
    y[i] = rng.next_double() - 0.5;
    y2[i] = 2.0 * y[i];
  }
  Gradient g1 = loss_gradient(zero, f, y, 0.0);
  Gradient g2 = loss_gradient(zero, f, y2, 0.0);
  CHECK((g2.dW - 2.0 * g1.dW).norm() < 1e-12);
  CHECK((g2.db - 2.0 * g1.db).norm() < 1e-12);
}

TEST_CASE("readout: gradient-descent regressor reaches the ridge optimum") {
  TrainHyper hyper{0.05, 200000, 1, 0.0, 2};
  for (std::uint64_t trial = 0; trial < 4; ++trial) {
    FeatureMatrix f = make_features(100, 8, 500 + trial);
    Pcg32 rng(600 + trial);
    std::vector<double> y(100);
    for (double& v : y) v = std::sin(3.0 * rng.next_double()) + 0.1 * rng.next_double();
    for (double l2 : {0.0, 1e-3}) {
      TrainHyper h = hyper;
      h.l2 = l2;
      TrainResult r = train_regressor_gd(f, y, h);
      ReadoutModel ridge = solve_least_squares(f, y, l2);
      double opt = regressor_loss(ridge, f, y, l2);
      CHECK(r.final_loss <= 1.01 * opt);
    }
  }
}

TEST_CASE("readout: regressor recovers an exact linear combination") {
  FeatureMatrix f = make_features(80, 4, 91);
  std::vector<double> y(80);
  for (std::size_t i = 0; i < 80; ++i)
    y[i] = 1.5 * f.at(i, 0) - 0.7 * f.at(i, 2) + 0.3;
  TrainResult r = train_regressor_gd(f, y, TrainHyper{0.05, 200000, 1, 0.0, 2});
  std::vector<double> pred = predict_series(r.model, f);
  double mse = 0.0;
  for (std::size_t i = 0; i < 80; ++i) mse += (pred[i] - y[i]) * (pred[i] - y[i]);
  mse /= 80.0;
  CHECK(mse < 1e-8);
  CHECK(r.model.weights(0, 0) == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(r.model.weights(2, 0) == doctest::Approx(-0.7).epsilon(1e-5));
}

TEST_CASE("readout: constant targets give zero weights and mean bias") {
  FeatureMatrix f = make_features(50, 3, 92);
  std::vector<double> y(50, 0.42);
  TrainResult r = train_regressor_gd(f, y, TrainHyper{0.05, 10000, 1, 0.0, 2});
  CHECK(r.model.weights.norm() < 1e-8);
  CHECK(r.model.bias(0) == doctest::Approx(0.42).epsilon(1e-10));
}

TEST_CASE("readout: closed-form least squares") {
  SUBCASE("two points, one feature: y = 2x") {
    FeatureMatrix f;
    f.rows = 2;
    f.cols = 1;
    f.values = {1.0, 2.0};
    f.col_meta = {0};
    std::vector<double> y{2.0, 4.0};
    ReadoutModel m = solve_least_squares(f, y, 0.0);
    CHECK(m.weights(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(m.bias(0) == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("duplicate columns with l2 = 0 are singular") {
    FeatureMatrix f = make_features(30, 3, 93);
    for (std::size_t i = 0; i < 30; ++i) f.at(i, 2) = f.at(i, 1);
    std::vector<double> y(30, 1.0);
    CHECK_THROWS_AS(solve_least_squares(f, y, 0.0), Singular);
  }
  SUBCASE("huge l2 shrinks the weights to zero") {
    FeatureMatrix f = make_features(40, 2, 94);
    Pcg32 rng(95);
    std::vector<double> y(40);
    for (double& v : y) v = rng.next_double();
    ReadoutModel m = solve_least_squares(f, y, 1e12);
    CHECK(m.weights.norm() < 1e-6);
  }
  SUBCASE("needs more rows than parameters") {
    FeatureMatrix f = make_features(3, 4, 96);
    std::vector<double> y{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(solve_least_squares(f, y, 0.0), ShapeMismatch);
  }
}

TEST_CASE("readout: classification prediction rules") {
  ReadoutModel m;
  m.kind = ModelKind::classifier;
  m.weights = Eigen::MatrixXd::Zero(1, 10);
  m.bias = Eigen::VectorXd::Zero(10);
  FeatureMatrix f;
  f.rows = 1;
  f.cols = 1;
  f.values = {1.0};
  f.col_meta = {0};

  SUBCASE("argmax picks the large logit") {
    m.bias(9) = 5.0;
    CHECK(predict_class(m, f) == std::vector<int>{9});
  }
  SUBCASE("all-equal logits tie-break toward digit 0") {
    CHECK(predict_class(m, f) == std::vector<int>{0});
  }
  SUBCASE("adding a constant to every logit never changes the argmax") {
    m.bias(3) = 2.0;
    std::vector<int> before = predict_class(m, f);
    m.bias.array() += 17.5;
    CHECK(predict_class(m, f) == before);
  }
  SUBCASE("regressor model rejected") {
    m.kind = ModelKind::regressor;
    CHECK_THROWS_AS(predict_class(m, f), ShapeMismatch);
  }
}

TEST_CASE("readout: series prediction rules") {
  ReadoutModel m;
  m.kind = ModelKind::regressor;
  m.weights = Eigen::MatrixXd::Zero(2, 1);
  m.bias = Eigen::VectorXd::Constant(1, 0.1);
  FeatureMatrix f = make_features(6, 2, 97);

  SUBCASE("zero weights give the constant bias") {
    for (double v : predict_series(m, f)) CHECK(v == doctest::Approx(0.1));
  }
  SUBCASE("identity weight reproduces the feature column") {
    m.weights(0, 0) = 1.0;
    m.bias(0) = 0.0;
    std::vector<double> pred = predict_series(m, f);
    for (std::size_t i = 0; i < 6; ++i) CHECK(pred[i] == doctest::Approx(f.at(i, 0)));
  }
}

TEST_CASE("readout: classifier training on a separable toy problem") {
  // Two well-separated clusters labeled 0 and 1.
  FeatureMatrix f;
  f.rows = 40;
  f.cols = 2;
  f.values.resize(80);
  f.col_meta = {0, 1};
  std::vector<int> labels(40);
  Pcg32 rng(7);
  for (std::size_t i = 0; i < 40; ++i) {
    int cls = i % 2;
    labels[i] = cls;
    f.at(i, 0) = (cls ? 1.0 : -1.0) + 0.1 * (rng.next_double() - 0.5);
    f.at(i, 1) = 0.2 * (rng.next_double() - 0.5);
  }

  for (ClassifierLoss loss : {ClassifierLoss::one_vs_all, ClassifierLoss::softmax}) {
    TrainHyper hyper{0.5, 200, 8, 0.0, 3};
    hyper.loss = loss;
    TrainResult r = train_classifier_gd(f, labels, hyper);
    std::vector<int> pred = predict_class(r.model, f);
    CHECK(accuracy(pred, labels) == doctest::Approx(1.0));
  }
}

TEST_CASE("readout: one epoch of descent lowers the loss") {
  FeatureMatrix f = make_features(30, 4, 98);
  std::vector<int> labels = random_labels(30, 99);
  ReadoutModel zero;
  zero.kind = ModelKind::classifier;
  zero.weights = Eigen::MatrixXd::Zero(4, 10);
  zero.bias = Eigen::VectorXd::Zero(10);
  double initial = classifier_loss(zero, f, labels, 0.0);
  TrainResult r = train_classifier_gd(f, labels, TrainHyper{0.05, 1, 8, 0.0, 1});
  CHECK(r.final_loss < initial);
}

TEST_CASE("readout: training is deterministic for a fixed seed") {
  FeatureMatrix f = make_features(50, 6, 101);
  std::vector<int> labels = random_labels(50, 102);
  TrainHyper hyper{0.1, 5, 16, 1e-4, 42};
  TrainResult a = train_classifier_gd(f, labels, hyper);
  TrainResult b = train_classifier_gd(f, labels, hyper);
  CHECK((a.model.weights.array() == b.model.weights.array()).all());
  CHECK((a.model.bias.array() == b.model.bias.array()).all());
  CHECK(a.final_loss == b.final_loss);
}

TEST_CASE("readout: hyperparameter validation") {
  CHECK_THROWS_AS((TrainHyper{0.0, 10, 8, 0.0, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((TrainHyper{0.1, 0, 8, 0.0, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((TrainHyper{0.1, 10, 0, 0.0, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((TrainHyper{0.1, 10, 8, -1.0, 1}.validate()), ConfigError);
}

TEST_CASE("readout: model JSON round-trip") {
  ReadoutModel m = random_classifier(5, 103);
  m.feature_meta = {4, 3, 2, 1, 0};
  ReadoutModel back = model_from_json(model_to_json(m));
  CHECK(back.kind == ModelKind::classifier);
  CHECK((back.weights.array() == m.weights.array()).all());
  CHECK((back.bias.array() == m.bias.array()).all());
  CHECK(back.feature_meta == m.feature_meta);
  CHECK_THROWS_AS(model_from_json("{\"kind\":\"mystery\",\"rows\":0,\"cols\":0,"
                                  "\"weights\":[],\"bias\":[]}"),
                  DataError);
}
