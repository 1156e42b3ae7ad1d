#include "nsrlab/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nsrlab/activations.hpp"

namespace nsrlab {

MLPParams::MLPParams(std::size_t n, std::size_t hidden, MlpOutput output_)
    : w_in("w_in", Shape{hidden, n}),
      b_hidden("b_hidden", Shape{1, hidden}),
      w_out("w_out", Shape{hidden, 1}),
      b_out("b_out", Shape{1, 1}),
      output(output_) {}

std::size_t MLPParams::learnable_count() const {
  return w_in.size() + b_hidden.size() + w_out.size() + b_out.size();
}

std::vector<ad::Parameter*> MLPParams::parameters() { return {&w_in, &b_hidden, &w_out, &b_out}; }

std::vector<const ad::Parameter*> MLPParams::parameters() const {
  return {&w_in, &b_hidden, &w_out, &b_out};
}

MLPParams init_mlp(std::size_t n, RngStream& rng, MlpOutput output, std::size_t hidden) {
  if (n == 0 || hidden == 0) throw std::invalid_argument("init_mlp: n and hidden must be >= 1");
  MLPParams p(n, hidden, output);
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(n));
  const double out_bound = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (double& v : p.w_in.value) v = rng.uniform(-in_bound, in_bound);
  for (double& v : p.b_hidden.value) v = rng.uniform(-in_bound, in_bound);
  for (double& v : p.w_out.value) v = rng.uniform(-out_bound, out_bound);
  for (double& v : p.b_out.value) v = rng.uniform(-out_bound, out_bound);
  return p;
}

double mlp_forward(std::span<const double> x, const MLPParams& params) {
  const std::size_t n = params.input_dim();
  if (x.size() != n) {
    throw std::invalid_argument("mlp_forward: input has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n));
  }
  double out = 0.0;
  for (std::size_t h = 0; h < params.hidden_dim(); ++h) {
    double pre = 0.0;
    for (std::size_t k = 0; k < n; ++k) pre += params.w_in(h, k) * x[k];
    pre += params.b_hidden.value[h];
    out += sigmoid(pre) * params.w_out.value[h];
  }
  out += params.b_out.value[0];
  return params.output == MlpOutput::kSigmoid ? sigmoid(out) : out;
}

ad::Var mlp_forward(ad::Tape& tape, MLPParams& params, ad::Var inputs) {
  if (tape.shape(inputs).cols != params.input_dim()) {
    throw ad::ShapeError("mlp_forward: inputs " + to_string(tape.shape(inputs)) +
                         " do not match input_dim " + std::to_string(params.input_dim()));
  }
  const ad::Var pre = tape.matmul(inputs, tape.transpose(tape.parameter(params.w_in))) +
                      tape.parameter(params.b_hidden);
  const ad::Var out =
      tape.matvec(ad::sigmoid(pre), tape.parameter(params.w_out)) + tape.parameter(params.b_out);
  return params.output == MlpOutput::kSigmoid ? ad::sigmoid(out) : out;
}

double mlp_mae_gradient(MLPParams& params, const Matrix& inputs,
                        std::span<const double> targets) {
  const std::size_t n = params.input_dim();
  const std::size_t hidden = params.hidden_dim();
  const std::size_t batch = inputs.rows();
  if (inputs.cols() != n || targets.size() != batch || batch == 0) {
    throw std::invalid_argument("mlp_mae_gradient: inputs " + to_string(inputs.shape()) +
                                " and " + std::to_string(targets.size()) +
                                " targets do not fit input_dim " + std::to_string(n));
  }
  std::vector<double> act(hidden);
  double loss = 0.0;
  for (std::size_t row = 0; row < batch; ++row) {
    const auto x = inputs.row(row);
    double out = params.b_out.value[0];
    for (std::size_t h = 0; h < hidden; ++h) {
      double pre = params.b_hidden.value[h];
      for (std::size_t k = 0; k < n; ++k) pre += params.w_in.value[h * n + k] * x[k];
      act[h] = sigmoid(pre);
      out += act[h] * params.w_out.value[h];
    }
    double pred = out;
    double dpred_dout = 1.0;
    if (params.output == MlpOutput::kSigmoid) {
      pred = sigmoid(out);
      dpred_dout = pred * (1.0 - pred);
    }
    const double err = pred - targets[row];
    loss += std::fabs(err);
    const double sign = err > 0.0 ? 1.0 : (err < 0.0 ? -1.0 : 0.0);
    if (sign == 0.0) continue;
    const double g = sign / static_cast<double>(batch) * dpred_dout;
    params.b_out.grad[0] += g;
    for (std::size_t h = 0; h < hidden; ++h) {
      params.w_out.grad[h] += g * act[h];
      const double g_pre = g * params.w_out.value[h] * act[h] * (1.0 - act[h]);
      params.b_hidden.grad[h] += g_pre;
      for (std::size_t k = 0; k < n; ++k) params.w_in.grad[h * n + k] += g_pre * x[k];
    }
  }
  return loss / static_cast<double>(batch);
}

namespace {

struct MlpRow {
  // Input-to-hidden weights: first index is the input, second the hidden unit.
  double v11, v12, v21, v22;
  double b1, b2;
  double h1, h2;
  double b;
};

MlpRow mlp_row(ComparisonOp op) {
  switch (op) {
    case ComparisonOp::kGT: return {100, 0, -100, 0, -50, -50, 100, 0, -50};
    case ComparisonOp::kLE: return {100, 0, -100, 0, -50, -50, -100, 0, 50};
    case ComparisonOp::kLT: return {-100, 0, 100, 0, -50, -50, 100, 0, -50};
    case ComparisonOp::kGE: return {-100, 0, 100, 0, -50, -50, -100, 0, 50};
    case ComparisonOp::kEQ: return {100, -100, -100, 100, -50, -50, -100, -100, 50};
    case ComparisonOp::kNE: return {100, -100, -100, 100, -50, -50, 100, 100, -50};
  }
  return {};
}

}  // namespace

MLPParams hand_weighted_mlp(ComparisonOp op) {
  const MlpRow w = mlp_row(op);
  MLPParams p(2);
  p.w_in(0, 0) = w.v11;
  p.w_in(0, 1) = w.v21;
  p.w_in(1, 0) = w.v12;
  p.w_in(1, 1) = w.v22;
  p.b_hidden.value[0] = w.b1;
  p.b_hidden.value[1] = w.b2;
  p.w_out.value[0] = w.h1;
  p.w_out.value[1] = w.h2;
  p.b_out.value[0] = w.b;
  return p;
}

double rnn_mlp_min_step(double m, double x, const MLPParams& params) {
  const double in[2] = {m, x};
  const double y = mlp_forward(in, params);
  return y * m + (1.0 - y) * x;
}

double rnn_mlp_count_step(double c, double x0, double xi, const MLPParams& params) {
  const double in[2] = {x0, xi};
  return c + mlp_forward(in, params);
}

}  // namespace nsrlab
