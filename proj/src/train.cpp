#include "nsrlab/train.hpp"

#include <cmath>
#include <stdexcept>

namespace nsrlab {

TrainReport train(std::span<ad::Parameter* const> params, const GradientStep& step,
                  const TrainConfig& config, const std::function<void()>& after_step) {
  if (config.epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
  const int log_every = config.log_every > 0 ? config.log_every : 100;
  TrainReport report;
  ad::zero_grads(params);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double value = step();
    if (!std::isfinite(value)) {
      report.ok = false;
      report.failure = "non-finite loss at epoch " + std::to_string(epoch);
      ad::zero_grads(params);
      break;
    }
    if (epoch % log_every == 0) report.loss_curve.push_back(value);
    report.final_loss = value;
    try {
      ad::adam_step(params, config.adam);
    } catch (const ad::NonFiniteGradient& e) {
      report.ok = false;
      report.failure = std::string(e.what()) + " at epoch " + std::to_string(epoch);
      ad::zero_grads(params);
      break;
    }
    if (after_step) after_step();
    report.epochs_run = epoch + 1;
  }
  return report;
}

TrainReport train(std::span<ad::Parameter* const> params, const LossBuilder& loss,
                  const TrainConfig& config, const std::function<void()>& after_step) {
  ad::Tape tape;
  return train(
      params,
      [&]() {
        tape.clear();
        const ad::Var l = loss(tape);
        const double value = l.scalar();
        if (std::isfinite(value)) tape.backward(l);
        return value;
      },
      config, after_step);
}

LossBuilder mae_loss(Predictor& model, const Dataset& data) {
  if (data.size() == 0) throw std::invalid_argument("mae_loss: empty dataset");
  return [&model, &data](ad::Tape& tape) {
    const ad::Var inputs = tape.constant(data.inputs);
    const ad::Var targets = tape.constant(Shape{data.size(), 1}, data.targets);
    const ad::Var loss = ad::mean(ad::abs(model.forward(tape, inputs) - targets));
    if (const auto extra = model.regularizer(tape)) return loss + *extra;
    return loss;
  };
}

TrainReport train(Predictor& model, const Dataset& data, const TrainConfig& config) {
  const auto params = model.parameters();
  const auto project = [&model]() { model.project(); };
  if (model.mae_gradient(data.inputs, data.targets)) {
    // The probe above only accumulated gradients; train() zeroes them first.
    return train(
        params, [&]() { return *model.mae_gradient(data.inputs, data.targets); }, config,
        project);
  }
  return train(params, mae_loss(model, data), config, project);
}

double classification_accuracy(std::span<const double> predictions,
                               std::span<const double> labels) {
  if (predictions.size() != labels.size() || labels.empty()) {
    throw std::invalid_argument("classification_accuracy: size mismatch or empty");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = predictions[i] > 0.5;
    if (predicted == (labels[i] > 0.5)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double regression_accuracy(std::span<const double> predictions, std::span<const double> targets,
                           double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("regression_accuracy: tol must be > 0");
  if (predictions.size() != targets.size() || targets.empty()) {
    throw std::invalid_argument("regression_accuracy: size mismatch or empty");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (std::fabs(predictions[i] - targets[i]) <= tol) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(targets.size());
}

namespace {

std::vector<double> predict_all(const Predictor& model, const Dataset& data) {
  std::vector<double> out(data.size());
  for (std::size_t r = 0; r < data.size(); ++r) out[r] = model.predict(data.inputs.row(r));
  return out;
}

}  // namespace

double eval_classification(const Predictor& model, const Dataset& data) {
  return classification_accuracy(predict_all(model, data), data.targets);
}

double eval_regression(const Predictor& model, const Dataset& data, double tol) {
  return regression_accuracy(predict_all(model, data), data.targets, tol);
}

}  // namespace nsrlab
