#include "nsrlab/selftest.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>

#include "nsrlab/activations.hpp"
#include "nsrlab/gnn.hpp"
#include "nsrlab/gradcheck.hpp"
#include "nsrlab/mlp.hpp"
#include "nsrlab/models.hpp"
#include "nsrlab/nsr.hpp"

namespace nsrlab {

BitFunctions default_bits() { return {&sign_bit_hat, &zero_bit_hat}; }

double nsr_truth_table_accuracy(ComparisonOp op, const BitFunctions& bits, int range) {
  const NSRParams p = hand_weighted_nsr(op);
  std::size_t correct = 0;
  std::size_t total = 0;
  for (int a = -range; a <= range; ++a) {
    for (int b = -range; b <= range; ++b) {
      const double x[2] = {static_cast<double>(a), static_cast<double>(b)};
      const NSRTrace t = nsr_forward(x, p);
      double z = 0.0;
      for (std::size_t j = 0; j < p.redundancy(); ++j) {
        z += p.w_plus.value[j] * bits.sign_bit(t.d[j], p.lambda) +
             p.w_zero.value[j] * bits.zero_bit(t.d[j], p.lambda) + p.bias.value[j];
      }
      if ((sigmoid(z) > 0.5) == truth(op, a, b)) ++correct;
      ++total;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

double mlp_truth_table_accuracy(ComparisonOp op, int range) {
  const MLPParams p = hand_weighted_mlp(op);
  std::size_t correct = 0;
  std::size_t total = 0;
  for (int a = -range; a <= range; ++a) {
    for (int b = -range; b <= range; ++b) {
      const double x[2] = {static_cast<double>(a), static_cast<double>(b)};
      if ((mlp_forward(x, p) > 0.5) == truth(op, a, b)) ++correct;
      ++total;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<double> dijkstra(const WeightedGraph& g) {
  const auto adj = g.adjacency();
  std::vector<double> dist(static_cast<std::size_t>(g.num_nodes),
                           std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(g.source)] = 0.0;
  queue.emplace(0.0, g.source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      const double candidate = d + static_cast<double>(w);
      if (candidate < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = candidate;
        queue.emplace(candidate, v);
      }
    }
  }
  return dist;
}

namespace {

SelfTestCheck gradient_check(const std::string& name, std::span<ad::Parameter* const> params,
                             const ad::ScalarModel& model) {
  const ad::GradCheckReport report = ad::finite_diff_check(params, model);
  return {name, report.passed(), report.summary()};
}

Matrix random_inputs(std::size_t rows, std::size_t cols, double scale, RngStream& rng) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = scale * rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

std::vector<SelfTestCheck> run_selftest(std::uint64_t seed, const BitFunctions& bits) {
  std::vector<SelfTestCheck> checks;
  RngStream root(seed);

  // Gradients. Inputs are scaled by 1/lambda so that the bits are not
  // saturated and central differences stay informative.
  for (double lambda : {0.1, 1.0, 10.0}) {
    RngStream rng = root.split("grad-nsr").split(static_cast<std::uint64_t>(lambda * 10));
    NSRParams p = init_params(3, 4, lambda, rng);
    const Matrix x = random_inputs(5, 3, 2.0 / lambda, rng);
    const auto params = p.parameters();
    checks.push_back(gradient_check("nsr gradient, lambda " + format_double(lambda), params,
                                    [&](ad::Tape& t) {
                                      return ad::sum(nsr_forward(t, p, t.constant(x)).y);
                                    }));
  }
  {
    RngStream rng = root.split("grad-mlp");
    MLPParams p = init_mlp(2, rng);
    const Matrix x = random_inputs(5, 2, 2.0, rng);
    const auto params = p.parameters();
    checks.push_back(gradient_check("mlp gradient", params, [&](ad::Tape& t) {
      return ad::sum(mlp_forward(t, p, t.constant(x)));
    }));
  }
  {
    RngStream rng = root.split("grad-gated");
    GatedNsrModel model = gated_piecewise_model(5, 3, 1.0, rng);
    const Matrix x = random_inputs(4, 5, 2.0, rng);
    const auto params = model.parameters();
    checks.push_back(gradient_check("gated model gradient", params, [&](ad::Tape& t) {
      return ad::sum(model.forward(t, t.constant(x)));
    }));
  }
  {
    RngStream rng = root.split("grad-closed-form");
    NSRParams p = init_params(2, 3, 1.0, rng);
    const Matrix x = random_inputs(6, 2, 2.0, rng);
    double worst = 0.0;
    for (std::size_t row = 0; row < x.rows(); ++row) {
      const NSRTrace trace = nsr_forward(x.row(row), p);
      const NSRGradients g = nsr_gradients(x.row(row), trace, p);
      NSRParams single = p;
      for (ad::Parameter* q : single.parameters()) q->zero_grad();
      ad::Tape tape;
      const Matrix one(1, 2, std::vector<double>(x.row(row).begin(), x.row(row).end()));
      tape.backward(nsr_forward(tape, single, tape.constant(one)).y);
      for (std::size_t j = 0; j < p.redundancy(); ++j) {
        worst = std::max(worst, ad::gradient_error(g.bias[j], single.bias.grad[j]));
        worst = std::max(worst, ad::gradient_error(g.w_plus[j], single.w_plus.grad[j]));
        worst = std::max(worst, ad::gradient_error(g.w_zero[j], single.w_zero.grad[j]));
        for (std::size_t k = 0; k < 2; ++k) {
          worst = std::max(worst, ad::gradient_error(g.v1(j, k), single.v1.grad[j * 2 + k]));
          worst = std::max(worst, ad::gradient_error(g.v2(j, k), single.v2.grad[j * 2 + k]));
        }
      }
    }
    checks.push_back({"closed-form nsr gradients match tape", worst < 1e-9,
                      "max error " + format_double(worst)});
  }

  // Hand-weight truth tables.
  for (ComparisonOp op : kAllComparisonOps) {
    const double nsr_acc = nsr_truth_table_accuracy(op, bits);
    checks.push_back({"nsr truth table " + std::string(to_string(op)), nsr_acc == 1.0,
                      "accuracy " + format_double(nsr_acc)});
    const double mlp_acc = mlp_truth_table_accuracy(op);
    checks.push_back({"mlp truth table " + std::string(to_string(op)), mlp_acc == 1.0,
                      "accuracy " + format_double(mlp_acc)});
  }

  // Bellman-Ford against Dijkstra, and the perfect GNN against Bellman-Ford.
  {
    RngStream rng = root.split("graphs");
    const GNNModel perfect = perfect_gnn();
    std::size_t bf_mismatch = 0;
    std::size_t gnn_mismatch = 0;
    for (int i = 0; i < 100; ++i) {
      const int n = static_cast<int>(rng.uniform_int(2, 8));
      const std::int64_t max_weight = rng.uniform_int(1, 20);
      const WeightedGraph g = random_graph(n, max_weight, rng);
      const std::vector<double> expected = dijkstra(g);
      if (bellman_ford(g).back() != expected) ++bf_mismatch;
      if (gnn_rollout(g, perfect, static_cast<std::size_t>(n)) != expected) ++gnn_mismatch;
    }
    checks.push_back({"bellman-ford equals dijkstra on 100 graphs", bf_mismatch == 0,
                      std::to_string(bf_mismatch) + " mismatches"});
    checks.push_back({"perfect gnn rollout equals bellman-ford on 100 graphs", gnn_mismatch == 0,
                      std::to_string(gnn_mismatch) + " mismatches"});
  }
  return checks;
}

}  // namespace nsrlab
