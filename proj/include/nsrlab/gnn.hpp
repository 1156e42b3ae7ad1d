#pragma once

// Shortest paths by message passing: every node folds its own distance and
// its neighbours' distance-plus-edge-weight messages with one shared
// recurrent-minimum NSR cell.

#include <span>
#include <vector>

#include "nsrlab/graph.hpp"
#include "nsrlab/models.hpp"
#include "nsrlab/rng.hpp"
#include "nsrlab/train.hpp"

namespace nsrlab {

class GNNModel {
 public:
  explicit GNNModel(NSRParams cell) : cell_(std::move(cell)) {}

  NsrModel& cell() { return cell_; }
  const NsrModel& cell() const { return cell_; }

 private:
  NsrModel cell_;  // the single weight-tied cell
};

GNNModel init_gnn(std::size_t redundancy, double lambda, RngStream& rng);

// The "<" row of the hand weights with gain 20, so the gate is exactly 0 or 1
// on integer distances and a rollout reproduces Bellman-Ford.
GNNModel perfect_gnn();

// Message list of node v: [d(v)] followed by d(u) + w(u, v) for neighbours u
// in ascending id order.
std::vector<double> node_messages(const WeightedGraph& g,
                                  const std::vector<std::vector<std::pair<int, std::int64_t>>>& adj,
                                  std::span<const double> states, int v);

// One synchronous update of all nodes. With `shuffle`, each node's neighbour
// messages are folded in a random order (its own distance stays first).
std::vector<double> gnn_step(const WeightedGraph& g, std::span<const double> states,
                             const GNNModel& model, RngStream* shuffle = nullptr);

// Free-running rollout from the initial table for `iterations` steps.
std::vector<double> gnn_rollout(const WeightedGraph& g, const GNNModel& model,
                                std::size_t iterations, RngStream* shuffle = nullptr);

// mean_v |rollout(v) - bellman_ford(v)| / max_weight after n iterations.
double eval_rollout(const WeightedGraph& g, const GNNModel& model, double max_weight,
                    RngStream* shuffle = nullptr);

// Teacher-forced supervision: every (graph, iteration, node) contributes its
// message list built from the true table d[t] and the target d[t+1](v).
// Identical rows are merged with a multiplicity weight; rows are grouped by
// list length.
struct MessageBucket {
  Matrix messages;  // rows x list length
  std::vector<double> targets;
  std::vector<double> weights;
};
std::vector<MessageBucket> teacher_forced_buckets(std::span<const WeightedGraph> graphs);

// Adam on the sum over all buckets of weight * |fold(messages) - target|.
// Graphs must be connected.
TrainReport train_teacher_forced(GNNModel& model, std::span<const WeightedGraph> graphs,
                                 const TrainConfig& config);

// `count` connected random graphs with `nodes` nodes and weights in [1, max_weight].
std::vector<WeightedGraph> random_connected_graphs(std::size_t count, int nodes,
                                                   std::int64_t max_weight, RngStream& rng);

}  // namespace nsrlab
