#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinrc/reservoir.hpp"

namespace spinrc {

enum class ModelKind { classifier, regressor };

// Linear readout: logits = W^T f + b. For the classifier the per-class
// outputs go through a sigmoid during training; prediction takes the argmax
// of the raw logits (sigmoid is monotone).
struct ReadoutModel {
  ModelKind kind = ModelKind::regressor;
  Eigen::MatrixXd weights;  // F x C
  Eigen::VectorXd bias;     // C
  std::vector<int> feature_meta;
};

// Classifier training objective: independent per-class sigmoids (the
// default) or a coupled softmax over the 10 logits.
enum class ClassifierLoss { one_vs_all, softmax };

struct TrainHyper {
  double learning_rate = 0.1;
  int epochs = 50;
  int batch_size = 64;
  double l2 = 0.0;
  std::uint64_t seed = 1;
  ClassifierLoss loss = ClassifierLoss::one_vs_all;  // ignored by the regressor

  void validate() const;
};

struct TrainResult {
  ReadoutModel model;
  double final_loss = 0.0;
};

// One-vs-all sigmoid binary cross-entropy, mini-batch gradient descent with
// seeded shuffling and zero initialization. Loss is averaged over samples
// (summed over the 10 classes) plus (l2/2)||W||^2.
TrainResult train_classifier_gd(const FeatureMatrix& features, std::span<const int> labels,
                                const TrainHyper& hyper);

// Mean-squared-error linear regression, full-batch steepest descent with
// exact line search on the (standardized) quadratic objective; `epochs`
// bounds the iteration count. Loss is mean((Wf+b-y)^2) + l2 ||w||^2.
TrainResult train_regressor_gd(const FeatureMatrix& features, std::span<const double> targets,
                               const TrainHyper& hyper);

// Closed-form ridge solution of the same regression objective via normal
// equations with an augmented bias column (bias unpenalized). The
// verification oracle for the gradient-descent trainer.
ReadoutModel solve_least_squares(const FeatureMatrix& features, std::span<const double> targets,
                                 double l2);

std::vector<int> predict_class(const ReadoutModel& model, const FeatureMatrix& features);
std::vector<double> predict_series(const ReadoutModel& model, const FeatureMatrix& features);

struct Gradient {
  Eigen::MatrixXd dW;
  Eigen::VectorXd db;
};

// Analytic gradient of the training objective at the given model; exposed
// for finite-difference verification.
Gradient loss_gradient(const ReadoutModel& model, const FeatureMatrix& features,
                       std::span<const int> labels, double l2 = 0.0,
                       ClassifierLoss loss = ClassifierLoss::one_vs_all);
Gradient loss_gradient(const ReadoutModel& model, const FeatureMatrix& features,
                       std::span<const double> targets, double l2 = 0.0);

double classifier_loss(const ReadoutModel& model, const FeatureMatrix& features,
                       std::span<const int> labels, double l2 = 0.0,
                       ClassifierLoss loss = ClassifierLoss::one_vs_all);
double regressor_loss(const ReadoutModel& model, const FeatureMatrix& features,
                      std::span<const double> targets, double l2 = 0.0);

// JSON (de)serialization: {"kind", "weights" (row-major), "bias", "feature_meta"}.
std::string model_to_json(const ReadoutModel& model);
ReadoutModel model_from_json(const std::string& text);

}  // namespace spinrc
