#pragma once

// Trainable models behind a common interface, plus the recurrent wiring that
// turns a two-input gate into a minimum tracker or a counter.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsrlab/matrix.hpp"
#include "nsrlab/mlp.hpp"
#include "nsrlab/nsr.hpp"
#include "nsrlab/tape.hpp"

namespace nsrlab {

class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual std::string model_name() const = 0;
  virtual std::size_t input_dim() const = 0;
  // Single-row evaluation without a tape.
  virtual double predict(std::span<const double> x) const = 0;
  // Batched evaluation on a tape; inputs batch x n, result batch x 1.
  virtual ad::Var forward(ad::Tape& tape, ad::Var inputs) = 0;
  virtual std::vector<ad::Parameter*> parameters() = 0;
  virtual std::unique_ptr<Predictor> clone() const = 0;
  // Closed-form full-batch MAE: adds the gradient into the parameters and
  // returns the loss. Models without one return nullopt and train on a tape.
  virtual std::optional<double> mae_gradient(const Matrix& /*inputs*/,
                                             std::span<const double> /*targets*/) {
    return std::nullopt;
  }
  // Called after every optimizer step, e.g. to keep weights in a feasible set.
  virtual void project() {}
  // Extra scalar added to the training loss, if any.
  virtual std::optional<ad::Var> regularizer(ad::Tape& /*tape*/) { return std::nullopt; }
};

// NSR read out through y.
class NsrModel final : public Predictor {
 public:
  explicit NsrModel(NSRParams params) : params_(std::move(params)) {}

  std::string model_name() const override { return "nsr"; }
  std::size_t input_dim() const override { return params_.input_dim(); }
  double predict(std::span<const double> x) const override { return nsr_forward(x, params_).y; }
  ad::Var forward(ad::Tape& tape, ad::Var inputs) override {
    return nsr_forward(tape, params_, inputs).y;
  }
  std::vector<ad::Parameter*> parameters() override { return params_.parameters(); }
  std::optional<double> mae_gradient(const Matrix& inputs,
                                     std::span<const double> targets) override {
    return nsr_mae_gradient(params_, inputs, targets);
  }
  std::unique_ptr<Predictor> clone() const override { return std::make_unique<NsrModel>(*this); }

  NSRParams& params() { return params_; }
  const NSRParams& params() const { return params_; }

 private:
  NSRParams params_;
};

class MlpModel final : public Predictor {
 public:
  explicit MlpModel(MLPParams params) : params_(std::move(params)) {}

  std::string model_name() const override { return "mlp"; }
  std::size_t input_dim() const override { return params_.input_dim(); }
  double predict(std::span<const double> x) const override { return mlp_forward(x, params_); }
  ad::Var forward(ad::Tape& tape, ad::Var inputs) override {
    return mlp_forward(tape, params_, inputs);
  }
  std::vector<ad::Parameter*> parameters() override { return params_.parameters(); }
  std::optional<double> mae_gradient(const Matrix& inputs,
                                     std::span<const double> targets) override {
    return mlp_mae_gradient(params_, inputs, targets);
  }
  std::unique_ptr<Predictor> clone() const override { return std::make_unique<MlpModel>(*this); }

  MLPParams& params() { return params_; }
  const MLPParams& params() const { return params_; }

 private:
  MLPParams params_;
};

// output = y * (a1.x + c1) + ybar * (a2.x + c2), with (y, ybar) from an NSR
// over the same inputs and two affine branch units without nonlinearity.
class GatedNsrModel final : public Predictor {
 public:
  GatedNsrModel(NSRParams gate, std::size_t n);

  std::string model_name() const override { return "nsr"; }
  std::size_t input_dim() const override { return gate_.input_dim(); }
  double predict(std::span<const double> x) const override;
  ad::Var forward(ad::Tape& tape, ad::Var inputs) override;
  std::vector<ad::Parameter*> parameters() override;
  std::unique_ptr<Predictor> clone() const override {
    return std::make_unique<GatedNsrModel>(*this);
  }
  std::optional<double> mae_gradient(const Matrix& inputs,
                                     std::span<const double> targets) override;
  // Branch weights are clipped to [-1, 1] like an arithmetic addition unit;
  // offsets stay free.
  void project() override;
  // sparsity * mean(min(|w|, 1 - |w|)) over the branch weights, pulling them
  // toward {-1, 0, 1}.
  std::optional<ad::Var> regularizer(ad::Tape& tape) override;
  double sparsity = 0.0;

  NSRParams& gate() { return gate_; }
  ad::Parameter& branch_weights(int branch) { return branch == 0 ? a1_ : a2_; }
  ad::Parameter& branch_offset(int branch) { return branch == 0 ? c1_ : c2_; }

 private:
  NSRParams gate_;
  ad::Parameter a1_;
  ad::Parameter c1_;
  ad::Parameter a2_;
  ad::Parameter c2_;
};

// NSR gate with n_inputs inputs; branch weights drawn uniform in [-1, 1].
GatedNsrModel gated_piecewise_model(std::size_t n_inputs, std::size_t r, double lambda,
                                    RngStream& rng);

// --- recurrent wiring over any two-input gate ---

// m' = g*m + (1-g)*x with g = gate(m, x).
double min_step(double m, double x, const Predictor& gate);
// c' = c + gate(x0, xi).
double count_step(double c, double x0, double xi, const Predictor& gate);

// Fold a whole list: the minimum starts at list[0]; the counter starts at 0
// and visits list[1..].
double run_min(std::span<const double> list, const Predictor& gate);
double run_count(std::span<const double> list, const Predictor& gate);

// Batched versions over the rows of `lists`; results are batch x 1.
ad::Var min_rollout(ad::Tape& tape, Predictor& gate, const Matrix& lists);
ad::Var count_rollout(ad::Tape& tape, Predictor& gate, const Matrix& lists);

}  // namespace nsrlab
