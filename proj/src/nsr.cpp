#include "nsrlab/nsr.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nsrlab/activations.hpp"

namespace nsrlab {

double sign_bit_hat(double x, double lambda) { return std::tanh(lambda * x); }

double zero_bit_hat(double x, double lambda) {
  const double t = std::tanh(lambda * x);
  return 1.0 - 2.0 * (t * t);
}

double sign_bit_hat_derivative(double x, double lambda) {
  const double t = std::tanh(lambda * x);
  return lambda * (1.0 - t * t);
}

double zero_bit_hat_derivative(double x, double lambda) {
  const double t = std::tanh(lambda * x);
  return -4.0 * lambda * t * (1.0 - t * t);
}

NSRParams::NSRParams(std::size_t n, std::size_t r, double lambda_)
    : v1("v1", Shape{r, n}),
      v2("v2", Shape{r, n}),
      w_plus("w_plus", Shape{r, 1}),
      w_zero("w_zero", Shape{r, 1}),
      bias("bias", Shape{r, 1}),
      lambda(lambda_) {}

std::size_t NSRParams::learnable_count() const {
  return v1.size() + v2.size() + w_plus.size() + w_zero.size() + bias.size();
}

std::vector<ad::Parameter*> NSRParams::parameters() {
  return {&v1, &v2, &w_plus, &w_zero, &bias};
}

std::vector<const ad::Parameter*> NSRParams::parameters() const {
  return {&v1, &v2, &w_plus, &w_zero, &bias};
}

void NSRParams::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("NSR: lambda must be positive and finite, got " +
                                std::to_string(lambda));
  }
  const std::size_t r = redundancy();
  const std::size_t n = input_dim();
  if (r == 0 || n == 0) throw std::invalid_argument("NSR: redundancy and input_dim must be >= 1");
  if (v2.shape != v1.shape || w_plus.shape != Shape{r, 1} || w_zero.shape != Shape{r, 1} ||
      bias.shape != Shape{r, 1}) {
    throw std::invalid_argument("NSR: inconsistent parameter shapes");
  }
  for (const ad::Parameter* p : parameters()) {
    for (double v : p->value) {
      if (!std::isfinite(v)) throw std::invalid_argument("NSR: non-finite entry in " + p->name);
    }
  }
}

namespace {

// Softmax of row j of a selection matrix, dotted with x.
double select_operand(const ad::Parameter& logits, std::size_t row, std::span<const double> x,
                      std::vector<double>& weights) {
  const std::size_t n = logits.shape.cols;
  weights.assign(logits.value.begin() + row * n, logits.value.begin() + (row + 1) * n);
  softmax_inplace(weights);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += weights[k] * x[k];
  return acc;
}

}  // namespace

NSRTrace nsr_forward(std::span<const double> x, const NSRParams& params) {
  const std::size_t n = params.input_dim();
  const std::size_t r = params.redundancy();
  if (x.size() != n) {
    throw std::invalid_argument("nsr_forward: input has length " + std::to_string(x.size()) +
                                ", expected " + std::to_string(n));
  }
  NSRTrace t;
  t.o1.resize(r);
  t.o2.resize(r);
  t.d.resize(r);
  t.bplus.resize(r);
  t.bzero.resize(r);
  std::vector<double> weights;
  double z = 0.0;
  for (std::size_t j = 0; j < r; ++j) {
    t.o1[j] = select_operand(params.v1, j, x, weights);
    t.o2[j] = select_operand(params.v2, j, x, weights);
    t.d[j] = t.o1[j] - t.o2[j];
    t.bplus[j] = sign_bit_hat(t.d[j], params.lambda);
    t.bzero[j] = zero_bit_hat(t.d[j], params.lambda);
    z += params.w_plus.value[j] * t.bplus[j] + params.w_zero.value[j] * t.bzero[j] +
         params.bias.value[j];
  }
  t.z = z;
  t.y = sigmoid(z);
  t.ybar = 1.0 - t.y;
  return t;
}

NSRGradients nsr_gradients(std::span<const double> x, const NSRTrace& trace,
                           const NSRParams& params) {
  const std::size_t n = params.input_dim();
  const std::size_t r = params.redundancy();
  const double lambda = params.lambda;
  const double dy_dz = trace.y * (1.0 - trace.y);

  NSRGradients g;
  g.v1 = Matrix(r, n);
  g.v2 = Matrix(r, n);
  g.w_plus.resize(r);
  g.w_zero.resize(r);
  g.bias.assign(r, dy_dz);
  g.o1.resize(r);
  g.o2.resize(r);

  std::vector<double> s1;
  std::vector<double> s2;
  for (std::size_t j = 0; j < r; ++j) {
    g.w_plus[j] = dy_dz * trace.bplus[j];
    g.w_zero[j] = dy_dz * trace.bzero[j];
    const double bplus_prime = sign_bit_hat_derivative(trace.d[j], lambda);
    const double bzero_prime = zero_bit_hat_derivative(trace.d[j], lambda);
    g.o1[j] = dy_dz * (bplus_prime * params.w_plus.value[j] + bzero_prime * params.w_zero.value[j]);
    g.o2[j] = -g.o1[j];

    // o = softmax(v) . x, so do/dv_k = s_k (x_k - o).
    select_operand(params.v1, j, x, s1);
    select_operand(params.v2, j, x, s2);
    for (std::size_t k = 0; k < n; ++k) {
      g.v1(j, k) = g.o1[j] * s1[k] * (x[k] - trace.o1[j]);
      g.v2(j, k) = g.o2[j] * s2[k] * (x[k] - trace.o2[j]);
    }
  }
  return g;
}

const std::vector<double>& NsrBatch::forward(const Matrix& inputs) {
  const NSRParams& p = *params_;
  const std::size_t n = p.input_dim();
  const std::size_t r = p.redundancy();
  const std::size_t batch = inputs.rows();
  if (inputs.cols() != n) {
    throw std::invalid_argument("NsrBatch: inputs " + to_string(inputs.shape()) +
                                " do not fit input_dim " + std::to_string(n));
  }
  inputs_ = &inputs;
  s1_ = p.v1.value;
  s2_ = p.v2.value;
  for (std::size_t j = 0; j < r; ++j) {
    softmax_inplace(std::span<double>(s1_).subspan(j * n, n));
    softmax_inplace(std::span<double>(s2_).subspan(j * n, n));
  }
  o1_.resize(batch * r);
  o2_.resize(batch * r);
  t_.resize(batch * r);
  y_.resize(batch);
  for (std::size_t row = 0; row < batch; ++row) {
    const auto x = inputs.row(row);
    double z = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      double a = 0.0;
      double b = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        a += s1_[j * n + k] * x[k];
        b += s2_[j * n + k] * x[k];
      }
      const double t = std::tanh(p.lambda * (a - b));
      o1_[row * r + j] = a;
      o2_[row * r + j] = b;
      t_[row * r + j] = t;
      z += p.w_plus.value[j] * t + p.w_zero.value[j] * (1.0 - 2.0 * t * t) + p.bias.value[j];
    }
    y_[row] = sigmoid(z);
  }
  return y_;
}

void NsrBatch::backward(std::span<const double> dy) {
  if (inputs_ == nullptr || dy.size() != y_.size()) {
    throw std::invalid_argument("NsrBatch::backward: no matching forward pass");
  }
  NSRParams& p = *params_;
  const std::size_t n = p.input_dim();
  const std::size_t r = p.redundancy();
  for (std::size_t row = 0; row < y_.size(); ++row) {
    if (dy[row] == 0.0) continue;
    const auto x = inputs_->row(row);
    const double g = dy[row] * y_[row] * (1.0 - y_[row]);
    for (std::size_t j = 0; j < r; ++j) {
      const double t = t_[row * r + j];
      p.bias.grad[j] += g;
      p.w_plus.grad[j] += g * t;
      p.w_zero.grad[j] += g * (1.0 - 2.0 * t * t);
      const double g_o1 =
          g * p.lambda * (1.0 - t * t) * (p.w_plus.value[j] - 4.0 * t * p.w_zero.value[j]);
      const double o1 = o1_[row * r + j];
      const double o2 = o2_[row * r + j];
      for (std::size_t k = 0; k < n; ++k) {
        p.v1.grad[j * n + k] += g_o1 * s1_[j * n + k] * (x[k] - o1);
        p.v2.grad[j * n + k] -= g_o1 * s2_[j * n + k] * (x[k] - o2);
      }
    }
  }
}

double nsr_mae_gradient(NSRParams& params, const Matrix& inputs,
                        std::span<const double> targets) {
  if (targets.size() != inputs.rows() || targets.empty()) {
    throw std::invalid_argument("nsr_mae_gradient: " + std::to_string(targets.size()) +
                                " targets for " + std::to_string(inputs.rows()) + " rows");
  }
  NsrBatch batch(params);
  const std::vector<double>& y = batch.forward(inputs);
  const double scale = 1.0 / static_cast<double>(targets.size());
  std::vector<double> dy(y.size());
  double loss = 0.0;
  for (std::size_t row = 0; row < y.size(); ++row) {
    const double err = y[row] - targets[row];
    loss += std::fabs(err);
    dy[row] = err > 0.0 ? scale : (err < 0.0 ? -scale : 0.0);
  }
  batch.backward(dy);
  return loss * scale;
}

NSRParams init_params(std::size_t n, std::size_t r, double lambda, RngStream& rng) {
  if (n == 0 || r == 0) throw std::invalid_argument("init_params: n and r must be >= 1");
  NSRParams p(n, r, lambda);
  // Draw unit by unit so that a unit's initial values do not depend on r.
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t k = 0; k < n; ++k) p.v1(j, k) = rng.normal();
    for (std::size_t k = 0; k < n; ++k) p.v2(j, k) = rng.normal();
    p.w_plus.value[j] = rng.normal();
    p.w_zero.value[j] = rng.normal();
    p.bias.value[j] = rng.normal();
  }
  p.validate();
  return p;
}

ComparisonWeights comparison_weights(ComparisonOp op) {
  switch (op) {
    case ComparisonOp::kGT: return {100.0, 0.0, -50.0};
    case ComparisonOp::kLE: return {-100.0, 0.0, 50.0};
    case ComparisonOp::kLT: return {-100.0, -100.0, -50.0};
    case ComparisonOp::kGE: return {100.0, 100.0, 50.0};
    case ComparisonOp::kEQ: return {0.0, 100.0, -50.0};
    case ComparisonOp::kNE: return {0.0, -100.0, 50.0};
  }
  return {};
}

NSRParams hand_weighted_nsr(ComparisonOp op, double lambda, double gain) {
  // softmax([0, -1000]) is exactly [1, 0] in double precision.
  constexpr double kOff = -1000.0;
  NSRParams p(2, 1, lambda);
  p.v1.value = {0.0, kOff};
  p.v2.value = {kOff, 0.0};
  const ComparisonWeights w = comparison_weights(op);
  p.w_plus.value = {gain * w.w_plus};
  p.w_zero.value = {gain * w.w_zero};
  p.bias.value = {gain * w.bias};
  p.validate();
  return p;
}

NSROutputs nsr_forward(ad::Tape& tape, NSRParams& params, ad::Var inputs) {
  if (tape.shape(inputs).cols != params.input_dim()) {
    throw ad::ShapeError("nsr_forward: inputs " + to_string(tape.shape(inputs)) +
                         " do not match input_dim " + std::to_string(params.input_dim()));
  }
  const ad::Var s1 = tape.softmax_rows(tape.parameter(params.v1));
  const ad::Var s2 = tape.softmax_rows(tape.parameter(params.v2));
  const ad::Var o1 = tape.matmul(inputs, tape.transpose(s1));
  const ad::Var o2 = tape.matmul(inputs, tape.transpose(s2));
  const ad::Var bplus = ad::tanh(params.lambda * (o1 - o2));
  const ad::Var bzero = tape.affine(bplus * bplus, -2.0, 1.0);
  const ad::Var z = tape.matvec(bplus, tape.parameter(params.w_plus)) +
                    tape.matvec(bzero, tape.parameter(params.w_zero)) +
                    ad::sum(tape.parameter(params.bias));
  const ad::Var y = ad::sigmoid(z);
  return {y, 1.0 - y};
}

double min_cell_step(double m, double x, const NSRParams& params) {
  const double in[2] = {m, x};
  const NSRTrace t = nsr_forward(in, params);
  return t.y * m + t.ybar * x;
}

double count_cell_step(double c, double x0, double xi, const NSRParams& params) {
  const double in[2] = {x0, xi};
  return c + nsr_forward(in, params).y;
}

}  // namespace nsrlab
