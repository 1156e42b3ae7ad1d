#pragma once

// Neural Status Register: a differentiable comparison layer.
//
// For each of r redundant units the layer selects two operands from the input
// vector with row-softmaxed logits V1, V2, takes their difference d, and
// activates a relaxed sign bit tanh(lambda*d) and a relaxed zero bit
// 1 - 2*tanh(lambda*d)^2. The weighted bits and per-unit biases of all units
// are summed into z, and the layer outputs y = sigmoid(z) and ybar = 1 - y.

#include <span>
#include <vector>

#include "nsrlab/comparison.hpp"
#include "nsrlab/matrix.hpp"
#include "nsrlab/rng.hpp"
#include "nsrlab/tape.hpp"

namespace nsrlab {

double sign_bit_hat(double x, double lambda);
double zero_bit_hat(double x, double lambda);
// Derivatives with respect to x.
double sign_bit_hat_derivative(double x, double lambda);
double zero_bit_hat_derivative(double x, double lambda);

struct NSRParams {
  ad::Parameter v1;      // r x n operand-1 selection logits
  ad::Parameter v2;      // r x n operand-2 selection logits
  ad::Parameter w_plus;  // r x 1 weights on the sign bits
  ad::Parameter w_zero;  // r x 1 weights on the zero bits
  ad::Parameter bias;    // r x 1 per-unit biases
  double lambda = 1.0;   // bit sharpness, never trained

  NSRParams() = default;
  NSRParams(std::size_t n, std::size_t r, double lambda);

  std::size_t input_dim() const { return v1.shape.cols; }
  std::size_t redundancy() const { return v1.shape.rows; }
  std::size_t learnable_count() const;

  std::vector<ad::Parameter*> parameters();
  std::vector<const ad::Parameter*> parameters() const;

  // Throws std::invalid_argument on a bad lambda, inconsistent shapes or a
  // non-finite entry.
  void validate() const;
};

struct NSRTrace {
  std::vector<double> o1;
  std::vector<double> o2;
  std::vector<double> d;
  std::vector<double> bplus;
  std::vector<double> bzero;
  double z = 0.0;
  double y = 0.0;
  double ybar = 0.0;
};

NSRTrace nsr_forward(std::span<const double> x, const NSRParams& params);

// Partial derivatives of y with respect to every learnable and to the
// selected operands, in closed form.
struct NSRGradients {
  Matrix v1;
  Matrix v2;
  std::vector<double> w_plus;
  std::vector<double> w_zero;
  std::vector<double> bias;
  std::vector<double> o1;
  std::vector<double> o2;
};

NSRGradients nsr_gradients(std::span<const double> x, const NSRTrace& trace,
                           const NSRParams& params);

// All learnables i.i.d. standard normal.
NSRParams init_params(std::size_t n, std::size_t r, double lambda, RngStream& rng);

// Single-unit weights that realise `op` on integer inputs x1, x2 (n = 2).
// The selection logits put operand 1 on x1 and operand 2 on x2 with an
// exactly one-hot softmax. `gain` scales W+, W0 and b; a gain of 20 pushes
// every integer decision into the range where sigmoid rounds to exactly 0 or 1.
struct ComparisonWeights {
  double w_plus = 0.0;
  double w_zero = 0.0;
  double bias = 0.0;
};
ComparisonWeights comparison_weights(ComparisonOp op);
NSRParams hand_weighted_nsr(ComparisonOp op, double lambda = 1.0, double gain = 1.0);

struct NSROutputs {
  ad::Var y;     // batch x 1
  ad::Var ybar;  // batch x 1
};

// Batched forward on a tape; `inputs` is batch x n.
NSROutputs nsr_forward(ad::Tape& tape, NSRParams& params, ad::Var inputs);

// Batched forward/backward without a tape. forward() caches the softmaxed
// selections and bits of every row; backward() adds dL/dparams for a given
// dL/dy per row into each parameter's grad.
class NsrBatch {
 public:
  explicit NsrBatch(NSRParams& params) : params_(&params) {}

  const std::vector<double>& forward(const Matrix& inputs);
  void backward(std::span<const double> dy);

 private:
  NSRParams* params_;
  const Matrix* inputs_ = nullptr;
  std::vector<double> s1_, s2_;  // r x n softmaxed selections
  std::vector<double> o1_, o2_;  // batch x r operands
  std::vector<double> t_;        // batch x r sign bits
  std::vector<double> y_;
};

// Mean absolute error of y over the rows of `inputs` against `targets`;
// adds its closed-form gradient into each parameter's grad. Agrees with
// mean(abs(nsr_forward(tape, ...).y - targets)) differentiated on a tape.
double nsr_mae_gradient(NSRParams& params, const Matrix& inputs,
                        std::span<const double> targets);

// Recurrent minimum: m' = y*m + ybar*x with (y, ybar) = NSR(m, x).
double min_cell_step(double m, double x, const NSRParams& params);
// Recurrent counter: c' = c + y with y = NSR(x0, xi).
double count_cell_step(double c, double x0, double xi, const NSRParams& params);

}  // namespace nsrlab
