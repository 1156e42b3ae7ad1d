#pragma once

#include <span>
#include <vector>

#include "nsrlab/comparison.hpp"
#include "nsrlab/matrix.hpp"
#include "nsrlab/rng.hpp"
#include "nsrlab/tape.hpp"

namespace nsrlab {

enum class MlpOutput { kSigmoid, kLinear };

// One hidden layer of sigmoid units and a single output neuron.
struct MLPParams {
  static constexpr std::size_t kDefaultHidden = 20;

  ad::Parameter w_in;      // hidden x n
  ad::Parameter b_hidden;  // 1 x hidden
  ad::Parameter w_out;     // hidden x 1
  ad::Parameter b_out;     // 1 x 1
  MlpOutput output = MlpOutput::kSigmoid;

  MLPParams() = default;
  MLPParams(std::size_t n, std::size_t hidden = kDefaultHidden,
            MlpOutput output = MlpOutput::kSigmoid);

  std::size_t input_dim() const { return w_in.shape.cols; }
  std::size_t hidden_dim() const { return w_in.shape.rows; }
  std::size_t learnable_count() const;

  std::vector<ad::Parameter*> parameters();
  std::vector<const ad::Parameter*> parameters() const;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias.
MLPParams init_mlp(std::size_t n, RngStream& rng, MlpOutput output = MlpOutput::kSigmoid,
                   std::size_t hidden = MLPParams::kDefaultHidden);

double mlp_forward(std::span<const double> x, const MLPParams& params);

// Batched forward; `inputs` is batch x n, result batch x 1.
ad::Var mlp_forward(ad::Tape& tape, MLPParams& params, ad::Var inputs);

// Mean absolute error over the rows of `inputs`; adds the gradient into each
// parameter's grad.
double mlp_mae_gradient(MLPParams& params, const Matrix& inputs,
                        std::span<const double> targets);

// Two active hidden units that realise `op` on integer pairs; the remaining
// hidden units have zero weights.
MLPParams hand_weighted_mlp(ComparisonOp op);

// Recurrent MLP cells: the MLP output replaces the NSR gate in the same
// wiring as min_cell_step / count_cell_step.
double rnn_mlp_min_step(double m, double x, const MLPParams& params);
double rnn_mlp_count_step(double c, double x0, double xi, const MLPParams& params);

}  // namespace nsrlab
