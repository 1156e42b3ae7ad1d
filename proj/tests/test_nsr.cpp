#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsrlab/models.hpp"
#include "nsrlab/nsr.hpp"
#include "nsrlab/selftest.hpp"
#include "nsrlab/tape.hpp"

using namespace nsrlab;

namespace {

// y recomputed in long double straight from the layer definition.
long double reference_y(const std::vector<double>& x, const NSRParams& p) {
  const std::size_t n = p.input_dim();
  long double z = 0.0L;
  for (std::size_t j = 0; j < p.redundancy(); ++j) {
    long double o[2] = {0.0L, 0.0L};
    const ad::Parameter* logits[2] = {&p.v1, &p.v2};
    for (int side = 0; side < 2; ++side) {
      long double top = -INFINITY;
      for (std::size_t k = 0; k < n; ++k) top = std::max<long double>(top, (*logits[side])(j, k));
      long double total = 0.0L;
      for (std::size_t k = 0; k < n; ++k) total += std::exp((*logits[side])(j, k) - top);
      for (std::size_t k = 0; k < n; ++k) {
        o[side] += std::exp((*logits[side])(j, k) - top) / total * x[k];
      }
    }
    const long double t = std::tanh(static_cast<long double>(p.lambda) * (o[0] - o[1]));
    z += p.w_plus.value[j] * t + p.w_zero.value[j] * (1.0L - 2.0L * t * t) + p.bias.value[j];
  }
  return 1.0L / (1.0L + std::exp(-z));
}

long double fd(std::vector<double>& v, std::size_t i, const std::vector<double>& x,
               const NSRParams& p) {
  const long double h = 1e-6L;
  const double saved = v[i];
  v[i] = static_cast<double>(saved + h);
  const long double up = reference_y(x, p);
  v[i] = static_cast<double>(saved - h);
  const long double down = reference_y(x, p);
  v[i] = saved;
  return (up - down) / (2.0L * h);
}

NSRParams random_params(std::uint64_t seed, std::size_t n, std::size_t r, double lambda) {
  RngStream rng(seed);
  return init_params(n, r, lambda, rng);
}

}  // namespace

TEST_CASE("relaxed bits at known points") {
  CHECK(sign_bit_hat(1.0, 1.0) == doctest::Approx(0.7615941559557649));
  CHECK(zero_bit_hat(1.0, 1.0) == doctest::Approx(-0.1600513167719476));
  CHECK(sign_bit_hat(0.0, 3.0) == 0.0);
  CHECK(zero_bit_hat(0.0, 3.0) == 1.0);
  CHECK(sign_bit_hat(0.5, 3.0) == doctest::Approx(0.9051482536));
  CHECK(zero_bit_hat(-1.0, 1.0) == doctest::Approx(zero_bit_hat(1.0, 1.0)));
  CHECK(zero_bit_hat(50.0, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("bit derivatives match central differences") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (double x : {-1.3, -0.2, 0.0, 0.05, 0.7}) {
      const double h = 1e-6;
      const double ds = (sign_bit_hat(x + h, lambda) - sign_bit_hat(x - h, lambda)) / (2 * h);
      const double dz = (zero_bit_hat(x + h, lambda) - zero_bit_hat(x - h, lambda)) / (2 * h);
      CHECK(sign_bit_hat_derivative(x, lambda) == doctest::Approx(ds).epsilon(1e-6));
      CHECK(zero_bit_hat_derivative(x, lambda) == doctest::Approx(dz).epsilon(1e-6));
    }
  }
}

TEST_CASE("forward trace agrees with a long-double reference") {
  const NSRParams p = random_params(3, 4, 5, 0.7);
  const std::vector<double> x{1.5, -2.0, 0.25, 3.0};
  const NSRTrace t = nsr_forward(x, p);
  CHECK(t.y == doctest::Approx(static_cast<double>(reference_y(x, p))).epsilon(1e-12));
  CHECK(t.ybar == doctest::Approx(1.0 - t.y));
  CHECK(t.o1.size() == 5);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(t.d[j] == doctest::Approx(t.o1[j] - t.o2[j]));
    CHECK(t.bzero[j] == doctest::Approx(1.0 - 2.0 * t.bplus[j] * t.bplus[j]));
  }
}

TEST_CASE("closed-form gradients match long-double differences") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      NSRParams p = random_params(seed, 3, 4, lambda);
      RngStream rng(100 + seed);
      std::vector<double> x(3);
      for (double& v : x) v = rng.uniform(-2.0, 2.0) / lambda;
      const NSRGradients g = nsr_gradients(x, nsr_forward(x, p), p);
      for (std::size_t i = 0; i < p.v1.size(); ++i) {
        CHECK(g.v1.values()[i] ==
              doctest::Approx(static_cast<double>(fd(p.v1.value, i, x, p))).epsilon(1e-6));
        CHECK(g.v2.values()[i] ==
              doctest::Approx(static_cast<double>(fd(p.v2.value, i, x, p))).epsilon(1e-6));
      }
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(g.w_plus[j] ==
              doctest::Approx(static_cast<double>(fd(p.w_plus.value, j, x, p))).epsilon(1e-6));
        CHECK(g.w_zero[j] ==
              doctest::Approx(static_cast<double>(fd(p.w_zero.value, j, x, p))).epsilon(1e-6));
        CHECK(g.bias[j] ==
              doctest::Approx(static_cast<double>(fd(p.bias.value, j, x, p))).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("tape forward and batched MAE gradient agree with the closed form") {
  NSRParams p = random_params(9, 2, 10, 1.0);
  const Matrix inputs(5, 2, std::vector<double>{1, 2, 3, 3, -4, 1, 0, -2, 7, 7});
  const std::vector<double> targets{0, 0, 1, 1, 0};

  ad::Tape tape;
  const ad::Var y = nsr_forward(tape, p, tape.constant(inputs)).y;
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(y.value()[r] == doctest::Approx(nsr_forward(inputs.row(r), p).y).epsilon(1e-12));
  }
  const ad::Var loss = ad::mean(ad::abs(y - tape.constant(Shape{5, 1}, targets)));
  tape.backward(loss);
  std::vector<std::vector<double>> tape_grads;
  for (ad::Parameter* q : p.parameters()) {
    tape_grads.push_back(q->grad);
    q->zero_grad();
  }
  const double closed = nsr_mae_gradient(p, inputs, targets);
  CHECK(closed == doctest::Approx(loss.scalar()).epsilon(1e-12));
  const auto params = p.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t k = 0; k < params[i]->size(); ++k) {
      CHECK(params[i]->grad[k] == doctest::Approx(tape_grads[i][k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("parameter count and validation") {
  const NSRParams p(2, 10, 1.0);
  CHECK(p.learnable_count() == 70);
  NSRParams bad(2, 1, 1.0);
  bad.lambda = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  NSRParams nan(2, 1, 1.0);
  nan.w_plus.value[0] = std::nan("");
  CHECK_THROWS_AS(nan.validate(), std::invalid_argument);
}

TEST_CASE("init is deterministic per seed") {
  const NSRParams a = random_params(5, 2, 3, 1.0);
  const NSRParams b = random_params(5, 2, 3, 1.0);
  const NSRParams c = random_params(6, 2, 3, 1.0);
  CHECK(a.v1.value == b.v1.value);
  CHECK(a.bias.value == b.bias.value);
  CHECK(a.v1.value != c.v1.value);
}

TEST_CASE("hand-weighted NSR decides every small integer pair") {
  for (ComparisonOp op : kAllComparisonOps) {
    CAPTURE(to_string(op));
    const NSRParams p = hand_weighted_nsr(op);
    for (int a = -20; a <= 20; ++a) {
      for (int b = -20; b <= 20; ++b) {
        const std::vector<double> x{double(a), double(b)};
        CHECK((nsr_forward(x, p).y > 0.5) == truth(op, a, b));
      }
    }
  }
}

TEST_CASE("gain 20 gives exact 0/1 outputs for the min gate") {
  const NSRParams lt = hand_weighted_nsr(ComparisonOp::kLT, 1.0, 20.0);
  CHECK(nsr_forward(std::vector<double>{1, 2}, lt).y == 1.0);
  CHECK(nsr_forward(std::vector<double>{2, 1}, lt).y == 0.0);
  CHECK(min_cell_step(5.0, 3.0, lt) == 3.0);
  CHECK(min_cell_step(3.0, 5.0, lt) == 3.0);
  CHECK(count_cell_step(2.0, 1.0, 4.0, lt) == 3.0);
  CHECK(count_cell_step(2.0, 4.0, 1.0, lt) == 2.0);
}

TEST_CASE("selftest truth table catches a corrupted zero bit") {
  CHECK(nsr_truth_table_accuracy(ComparisonOp::kEQ, default_bits()) == 1.0);
  const BitFunctions flipped{sign_bit_hat,
                             [](double x, double lambda) { return -zero_bit_hat(x, lambda); }};
  CHECK(nsr_truth_table_accuracy(ComparisonOp::kEQ, flipped) < 0.5);
  bool any_failed = false;
  for (const SelfTestCheck& c : run_selftest(0, flipped)) any_failed = any_failed || !c.passed;
  CHECK(any_failed);
}

TEST_CASE("selftest passes for several seeds") {
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    for (const SelfTestCheck& c : run_selftest(seed, default_bits())) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.passed);
    }
  }
}

TEST_CASE("gated model with hand-set branches reproduces abs and f") {
  GatedNsrModel abs_model(hand_weighted_nsr(ComparisonOp::kGT, 1.0, 20.0), 2);
  abs_model.branch_weights(0).value = {1.0, -1.0};
  abs_model.branch_weights(1).value = {-1.0, 1.0};
  for (int a = -30; a <= 30; a += 7) {
    for (int b = -30; b <= 30; b += 3) {
      if (a == b) continue;
      CHECK(abs_model.predict(std::vector<double>{double(a), double(b)}) ==
            doctest::Approx(std::abs(a - b)));
    }
  }

  NSRParams gate(5, 1, 1.0);
  const NSRParams gt = hand_weighted_nsr(ComparisonOp::kGT, 1.0, 20.0);
  gate.v1.value = {gt.v1.value[0], gt.v1.value[1], -1000, -1000, -1000};
  gate.v2.value = {gt.v2.value[0], gt.v2.value[1], -1000, -1000, -1000};
  gate.w_plus = gt.w_plus;
  gate.w_zero = gt.w_zero;
  gate.bias = gt.bias;
  GatedNsrModel f_model(gate, 5);
  f_model.branch_weights(0).value = {0, 0, 0, 0, 1};
  f_model.branch_offset(0).value = {4.0};
  f_model.branch_weights(1).value = {0, 0, -1, 1, 0};
  const std::vector<double> above{3, 1, 10, 20, 7};
  const std::vector<double> below{1, 3, 10, 20, 7};
  CHECK(f_model.predict(above) == doctest::Approx(11.0));
  CHECK(f_model.predict(below) == doctest::Approx(10.0));

  // With the second branch zeroed and the gate saturated, the output is branch one.
  abs_model.branch_weights(1).value = {0.0, 0.0};
  CHECK(abs_model.predict(std::vector<double>{9, 2}) == doctest::Approx(7.0));
}

TEST_CASE("gated model closed-form gradient matches the tape, regularizer included") {
  RngStream rng(4);
  GatedNsrModel model = gated_piecewise_model(2, 3, 1.0, rng);
  model.sparsity = 0.1;
  const Matrix inputs(4, 2, std::vector<double>{1, 5, -3, 2, 4, 4, 7, -1});
  const std::vector<double> targets{4, 5, 0, 8};

  ad::Tape tape;
  ad::Var loss = ad::mean(
      ad::abs(model.forward(tape, tape.constant(inputs)) - tape.constant(Shape{4, 1}, targets)));
  loss = loss + *model.regularizer(tape);
  tape.backward(loss);
  std::vector<std::vector<double>> tape_grads;
  for (ad::Parameter* q : model.parameters()) {
    tape_grads.push_back(q->grad);
    q->zero_grad();
  }
  const double closed = *model.mae_gradient(inputs, targets);
  CHECK(closed == doctest::Approx(loss.scalar()).epsilon(1e-12));
  const auto params = model.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t k = 0; k < params[i]->size(); ++k) {
      CHECK(params[i]->grad[k] == doctest::Approx(tape_grads[i][k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("project clips branch weights to [-1, 1]") {
  RngStream rng(1);
  GatedNsrModel model = gated_piecewise_model(2, 1, 1.0, rng);
  model.branch_weights(0).value = {3.0, -0.5};
  model.branch_weights(1).value = {-7.0, 1.0};
  model.branch_offset(0).value = {12.0};
  model.project();
  CHECK(model.branch_weights(0).value == std::vector<double>{1.0, -0.5});
  CHECK(model.branch_weights(1).value == std::vector<double>{-1.0, 1.0});
  CHECK(model.branch_offset(0).value[0] == 12.0);
}
