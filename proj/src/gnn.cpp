#include "nsrlab/gnn.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace nsrlab {

GNNModel init_gnn(std::size_t redundancy, double lambda, RngStream& rng) {
  return GNNModel(init_params(2, redundancy, lambda, rng));
}

GNNModel perfect_gnn() { return GNNModel(hand_weighted_nsr(ComparisonOp::kLT, 1.0, 20.0)); }

std::vector<double> node_messages(const WeightedGraph& g,
                                  const std::vector<std::vector<std::pair<int, std::int64_t>>>& adj,
                                  std::span<const double> states, int v) {
  if (states.size() != static_cast<std::size_t>(g.num_nodes)) {
    throw std::invalid_argument("node_messages: state table has wrong length");
  }
  const auto& neighbours = adj[static_cast<std::size_t>(v)];
  std::vector<double> out;
  out.reserve(neighbours.size() + 1);
  out.push_back(states[static_cast<std::size_t>(v)]);
  for (const auto& [u, w] : neighbours) {
    out.push_back(states[static_cast<std::size_t>(u)] + static_cast<double>(w));
  }
  return out;
}

std::vector<double> gnn_step(const WeightedGraph& g, std::span<const double> states,
                             const GNNModel& model, RngStream* shuffle) {
  const auto adj = g.adjacency();
  std::vector<double> next(states.size());
  for (int v = 0; v < g.num_nodes; ++v) {
    std::vector<double> messages = node_messages(g, adj, states, v);
    if (shuffle != nullptr && messages.size() > 2) {
      std::vector<double> tail(messages.begin() + 1, messages.end());
      shuffle->shuffle(tail);
      std::copy(tail.begin(), tail.end(), messages.begin() + 1);
    }
    next[static_cast<std::size_t>(v)] = run_min(messages, model.cell());
  }
  return next;
}

std::vector<double> gnn_rollout(const WeightedGraph& g, const GNNModel& model,
                                std::size_t iterations, RngStream* shuffle) {
  std::vector<double> d(static_cast<std::size_t>(g.num_nodes), unreached_distance(g));
  d[static_cast<std::size_t>(g.source)] = 0.0;
  for (std::size_t t = 0; t < iterations; ++t) d = gnn_step(g, d, model, shuffle);
  return d;
}

double eval_rollout(const WeightedGraph& g, const GNNModel& model, double max_weight,
                    RngStream* shuffle) {
  if (!(max_weight > 0.0)) throw std::invalid_argument("eval_rollout: max_weight must be > 0");
  const auto n = static_cast<std::size_t>(g.num_nodes);
  const std::vector<double> predicted = gnn_rollout(g, model, n, shuffle);
  const std::vector<double> truth = bellman_ford(g).back();
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) total += std::fabs(predicted[v] - truth[v]);
  return total / static_cast<double>(n) / max_weight;
}

std::vector<MessageBucket> teacher_forced_buckets(std::span<const WeightedGraph> graphs) {
  // key: message list followed by the target
  std::map<std::vector<double>, double> counts;
  for (const WeightedGraph& g : graphs) {
    if (!is_connected(g)) throw std::invalid_argument("teacher_forced_buckets: graph not connected");
    const auto adj = g.adjacency();
    const auto tables = bellman_ford(g);
    for (std::size_t t = 0; t + 1 < tables.size(); ++t) {
      for (int v = 0; v < g.num_nodes; ++v) {
        std::vector<double> key = node_messages(g, adj, tables[t], v);
        // A single message passes through unchanged and carries no gradient.
        if (key.size() < 2) continue;
        key.push_back(tables[t + 1][static_cast<std::size_t>(v)]);
        counts[std::move(key)] += 1.0;
      }
    }
  }
  std::map<std::size_t, std::vector<const std::pair<const std::vector<double>, double>*>> by_len;
  for (const auto& entry : counts) by_len[entry.first.size() - 1].push_back(&entry);

  std::vector<MessageBucket> buckets;
  for (const auto& [len, rows] : by_len) {
    MessageBucket b{Matrix(rows.size(), len), {}, {}};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::vector<double>& key = rows[r]->first;
      for (std::size_t c = 0; c < len; ++c) b.messages(r, c) = key[c];
      b.targets.push_back(key.back());
      b.weights.push_back(rows[r]->second);
    }
    buckets.push_back(std::move(b));
  }
  return buckets;
}

TrainReport train_teacher_forced(GNNModel& model, std::span<const WeightedGraph> graphs,
                                 const TrainConfig& config) {
  const std::vector<MessageBucket> buckets = teacher_forced_buckets(graphs);
  if (buckets.empty()) throw std::invalid_argument("train_teacher_forced: nothing to supervise");
  NsrModel& cell = model.cell();
  const auto params = cell.parameters();
  return train(
      params,
      [&](ad::Tape& tape) {
        ad::Var total = tape.scalar(0.0);
        for (const MessageBucket& b : buckets) {
          const Shape col{b.targets.size(), 1};
          const ad::Var err = min_rollout(tape, cell, b.messages) - tape.constant(col, b.targets);
          total = total + ad::sum(tape.constant(col, b.weights) * ad::abs(err));
        }
        return total;
      },
      config);
}

std::vector<WeightedGraph> random_connected_graphs(std::size_t count, int nodes,
                                                   std::int64_t max_weight, RngStream& rng) {
  std::vector<WeightedGraph> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RngStream graph_rng = rng.split(static_cast<std::uint64_t>(i));
    out.push_back(random_graph(nodes, max_weight, graph_rng));
  }
  return out;
}

}  // namespace nsrlab
