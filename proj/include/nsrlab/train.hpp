#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsrlab/adam.hpp"
#include "nsrlab/models.hpp"
#include "nsrlab/tape.hpp"
#include "nsrlab/tasks.hpp"

namespace nsrlab {

struct TrainConfig {
  int epochs = 50000;
  ad::AdamConfig adam{};
  double lambda = 1.0;
  std::size_t redundancy = 10;
  // Regression tolerance for eval_regression.
  double tolerance = 0.1;
  // The loss curve keeps one point per `log_every` epochs.
  int log_every = 100;
};

struct TrainReport {
  std::vector<double> loss_curve;
  double final_loss = 0.0;
  int epochs_run = 0;
  bool ok = true;
  std::string failure;
};

using LossBuilder = std::function<ad::Var(ad::Tape&)>;
// Adds the gradient of the loss into the parameters and returns the loss.
using GradientStep = std::function<double()>;

// Full-batch Adam on the scalar built by `loss`, for config.epochs epochs.
// A non-finite loss or gradient stops the run; the report carries the reason
// and the parameters keep their last finite values.
// `after_step`, when set, runs after every optimizer update.
TrainReport train(std::span<ad::Parameter* const> params, const LossBuilder& loss,
                  const TrainConfig& config, const std::function<void()>& after_step = {});
TrainReport train(std::span<ad::Parameter* const> params, const GradientStep& step,
                  const TrainConfig& config, const std::function<void()>& after_step = {});

// Mean absolute error of model(inputs) against targets.
// train(Predictor&) prefers the model's closed-form mae_gradient when it has one.
LossBuilder mae_loss(Predictor& model, const Dataset& data);

TrainReport train(Predictor& model, const Dataset& data, const TrainConfig& config);

// Fraction of rows where (prediction > 0.5) equals the 0/1 label.
double eval_classification(const Predictor& model, const Dataset& data);

// Fraction of rows with |prediction - target| <= tol.
double eval_regression(const Predictor& model, const Dataset& data, double tol);

// Same metrics over precomputed predictions.
double classification_accuracy(std::span<const double> predictions,
                               std::span<const double> labels);
double regression_accuracy(std::span<const double> predictions, std::span<const double> targets,
                           double tol);

}  // namespace nsrlab
