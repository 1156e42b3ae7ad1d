#include "nsrlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsrlab {

GatedNsrModel::GatedNsrModel(NSRParams gate, std::size_t n)
    : gate_(std::move(gate)),
      a1_("a1", Shape{n, 1}),
      c1_("c1", Shape{1, 1}),
      a2_("a2", Shape{n, 1}),
      c2_("c2", Shape{1, 1}) {
  if (gate_.input_dim() != n) {
    throw std::invalid_argument("GatedNsrModel: gate input_dim does not match branch width");
  }
}

double GatedNsrModel::predict(std::span<const double> x) const {
  const NSRTrace t = nsr_forward(x, gate_);
  double b1 = c1_.value[0];
  double b2 = c2_.value[0];
  for (std::size_t k = 0; k < x.size(); ++k) {
    b1 += a1_.value[k] * x[k];
    b2 += a2_.value[k] * x[k];
  }
  return t.y * b1 + t.ybar * b2;
}

ad::Var GatedNsrModel::forward(ad::Tape& tape, ad::Var inputs) {
  const NSROutputs g = nsr_forward(tape, gate_, inputs);
  const ad::Var b1 = tape.matvec(inputs, tape.parameter(a1_)) + tape.parameter(c1_);
  const ad::Var b2 = tape.matvec(inputs, tape.parameter(a2_)) + tape.parameter(c2_);
  return g.y * b1 + g.ybar * b2;
}

std::vector<ad::Parameter*> GatedNsrModel::parameters() {
  std::vector<ad::Parameter*> out = gate_.parameters();
  out.insert(out.end(), {&a1_, &c1_, &a2_, &c2_});
  return out;
}

namespace {

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

std::optional<double> GatedNsrModel::mae_gradient(const Matrix& inputs,
                                                  std::span<const double> targets) {
  const std::size_t n = input_dim();
  const std::size_t batch = inputs.rows();
  if (targets.size() != batch || batch == 0) {
    throw std::invalid_argument("GatedNsrModel::mae_gradient: " +
                                std::to_string(targets.size()) + " targets for " +
                                std::to_string(batch) + " rows");
  }
  NsrBatch gate(gate_);
  const std::vector<double>& y = gate.forward(inputs);
  const double scale = 1.0 / static_cast<double>(batch);
  std::vector<double> dy(batch);
  double loss = 0.0;
  for (std::size_t row = 0; row < batch; ++row) {
    const auto x = inputs.row(row);
    double b1 = c1_.value[0];
    double b2 = c2_.value[0];
    for (std::size_t k = 0; k < n; ++k) {
      b1 += a1_.value[k] * x[k];
      b2 += a2_.value[k] * x[k];
    }
    const double err = y[row] * b1 + (1.0 - y[row]) * b2 - targets[row];
    loss += std::fabs(err);
    const double g = sign_of(err) * scale;
    dy[row] = g * (b1 - b2);
    for (std::size_t k = 0; k < n; ++k) {
      a1_.grad[k] += g * y[row] * x[k];
      a2_.grad[k] += g * (1.0 - y[row]) * x[k];
    }
    c1_.grad[0] += g * y[row];
    c2_.grad[0] += g * (1.0 - y[row]);
  }
  gate.backward(dy);
  loss *= scale;
  if (sparsity != 0.0) {
    const double share = sparsity / static_cast<double>(2 * n);
    for (ad::Parameter* p : {&a1_, &a2_}) {
      for (std::size_t k = 0; k < n; ++k) {
        const double w = p->value[k];
        const double m = std::fabs(w);
        loss += share * std::min(m, 1.0 - m);
        p->grad[k] -= share * sign_of(2.0 * m - 1.0) * sign_of(w);
      }
    }
  }
  return loss;
}

void GatedNsrModel::project() {
  for (ad::Parameter* p : {&a1_, &a2_}) {
    for (double& v : p->value) v = std::clamp(v, -1.0, 1.0);
  }
}

std::optional<ad::Var> GatedNsrModel::regularizer(ad::Tape& tape) {
  if (sparsity == 0.0) return std::nullopt;
  const ad::Var both[2] = {tape.parameter(a1_), tape.parameter(a2_)};
  const ad::Var magnitude = ad::abs(tape.concat_cols(both));
  // min(m, 1 - m) = (1 - |2m - 1|) / 2
  const ad::Var nearest = tape.affine(ad::abs(tape.affine(magnitude, 2.0, -1.0)), -0.5, 0.5);
  return sparsity * ad::mean(nearest);
}

GatedNsrModel gated_piecewise_model(std::size_t n_inputs, std::size_t r, double lambda,
                                    RngStream& rng) {
  if (n_inputs != 2 && n_inputs != 5) {
    throw std::invalid_argument("gated_piecewise_model: n_inputs must be 2 or 5");
  }
  RngStream gate_rng = rng.split("gate");
  RngStream branch_rng = rng.split("branches");
  GatedNsrModel model(init_params(n_inputs, r, lambda, gate_rng), n_inputs);
  for (int b = 0; b < 2; ++b) {
    for (double& v : model.branch_weights(b).value) v = branch_rng.uniform(-1.0, 1.0);
    model.branch_offset(b).value[0] = branch_rng.uniform(-1.0, 1.0);
  }
  return model;
}

double min_step(double m, double x, const Predictor& gate) {
  const double in[2] = {m, x};
  const double y = gate.predict(in);
  return y * m + (1.0 - y) * x;
}

double count_step(double c, double x0, double xi, const Predictor& gate) {
  const double in[2] = {x0, xi};
  return c + gate.predict(in);
}

double run_min(std::span<const double> list, const Predictor& gate) {
  if (list.empty()) throw std::invalid_argument("run_min: empty list");
  double m = list[0];
  for (std::size_t i = 1; i < list.size(); ++i) m = min_step(m, list[i], gate);
  return m;
}

double run_count(std::span<const double> list, const Predictor& gate) {
  if (list.empty()) throw std::invalid_argument("run_count: empty list");
  double c = 0.0;
  for (std::size_t i = 1; i < list.size(); ++i) c = count_step(c, list[0], list[i], gate);
  return c;
}

ad::Var min_rollout(ad::Tape& tape, Predictor& gate, const Matrix& lists) {
  if (lists.cols() == 0) throw std::invalid_argument("min_rollout: empty lists");
  ad::Var m = tape.column(lists.column_values(0));
  for (std::size_t i = 1; i < lists.cols(); ++i) {
    const ad::Var x = tape.column(lists.column_values(i));
    const ad::Var pair[2] = {m, x};
    const ad::Var y = gate.forward(tape, tape.concat_cols(pair));
    m = y * m + (1.0 - y) * x;
  }
  return m;
}

ad::Var count_rollout(ad::Tape& tape, Predictor& gate, const Matrix& lists) {
  if (lists.cols() == 0) throw std::invalid_argument("count_rollout: empty lists");
  const ad::Var first = tape.column(lists.column_values(0));
  ad::Var c = tape.constant(Shape{lists.rows(), 1}, std::vector<double>(lists.rows(), 0.0));
  for (std::size_t i = 1; i < lists.cols(); ++i) {
    const ad::Var x = tape.column(lists.column_values(i));
    const ad::Var pair[2] = {first, x};
    c = c + gate.forward(tape, tape.concat_cols(pair));
  }
  return c;
}

}  // namespace nsrlab
