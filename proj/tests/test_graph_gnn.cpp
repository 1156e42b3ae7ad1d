#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "nsrlab/gnn.hpp"
#include "nsrlab/graph.hpp"
#include "nsrlab/selftest.hpp"
#include "nsrlab/snapshot.hpp"

using namespace nsrlab;

namespace {

// O(n^3) all-pairs relaxation, independent of both Bellman-Ford and Dijkstra.
std::vector<double> floyd_warshall_from_source(const WeightedGraph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const Edge& e : g.edges) {
    const auto u = static_cast<std::size_t>(e.u);
    const auto v = static_cast<std::size_t>(e.v);
    d[u][v] = std::min(d[u][v], double(e.weight));
    d[v][u] = std::min(d[v][u], double(e.weight));
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d[static_cast<std::size_t>(g.source)];
}

WeightedGraph single_edge(std::int64_t w) {
  WeightedGraph g;
  g.num_nodes = 2;
  g.edges = {{0, 1, w}};
  return g;
}

}  // namespace

TEST_CASE("random graphs are connected, simple and within the weight range") {
  RngStream rng(1);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 12;
    const WeightedGraph g = random_graph(n, 10, rng);
    CHECK(g.num_nodes == n);
    CHECK(is_connected(g));
    CHECK(g.edges.size() >= static_cast<std::size_t>(n - 1));
    for (const Edge& e : g.edges) {
      CHECK(e.u != e.v);
      CHECK(e.weight >= 1);
      CHECK(e.weight <= 10);
    }
  }
  CHECK_THROWS_AS(random_graph(1, 10, rng), std::invalid_argument);
}

TEST_CASE("graph text format round trips and rejects bad input") {
  RngStream rng(2);
  const WeightedGraph g = random_graph(7, 30, rng);
  std::stringstream buf;
  write_graph(buf, g);
  CHECK(read_graph(buf) == g);

  std::istringstream bad_header("3\n");
  CHECK_THROWS_AS(read_graph(bad_header), std::runtime_error);
  std::istringstream bad_edge("3 0\n0 5 1\n");
  CHECK_THROWS_AS(read_graph(bad_edge), std::runtime_error);
  std::istringstream self_loop("3 0\n1 1 2\n");
  CHECK_THROWS_AS(read_graph(self_loop), std::runtime_error);
}

TEST_CASE("bellman-ford agrees with two independent oracles") {
  RngStream rng(3);
  for (int i = 0; i < 100; ++i) {
    const WeightedGraph g = random_graph(2 + i % 7, 10, rng);
    const auto tables = bellman_ford(g);
    CHECK(tables.size() == static_cast<std::size_t>(g.num_nodes) + 1);
    CHECK(tables.back() == floyd_warshall_from_source(g));
    CHECK(dijkstra(g) == tables.back());
  }
}

TEST_CASE("bellman-ford iterates start unreached and are monotone") {
  RngStream rng(4);
  const WeightedGraph g = random_graph(6, 10, rng);
  const auto tables = bellman_ford(g);
  CHECK(tables[0][0] == 0.0);
  for (std::size_t v = 1; v < 6; ++v) CHECK(tables[0][v] == unreached_distance(g));
  for (std::size_t t = 1; t < tables.size(); ++t) {
    CHECK(tables[t][0] == 0.0);
    for (std::size_t v = 0; v < 6; ++v) CHECK(tables[t][v] <= tables[t - 1][v]);
  }
}

TEST_CASE("perfect gate turns every gnn step into a bellman-ford iteration") {
  const GNNModel perfect = perfect_gnn();
  RngStream rng(5);
  RngStream order(6);
  for (int i = 0; i < 100; ++i) {
    const WeightedGraph g = random_graph(2 + i % 7, 10, rng);
    const auto tables = bellman_ford(g);
    for (std::size_t t = 0; t + 1 < tables.size(); ++t) {
      CHECK(gnn_step(g, tables[t], perfect) == tables[t + 1]);
    }
    CHECK(gnn_rollout(g, perfect, static_cast<std::size_t>(g.num_nodes)) == tables.back());
    CHECK(gnn_rollout(g, perfect, static_cast<std::size_t>(g.num_nodes), &order) == tables.back());
    CHECK(eval_rollout(g, perfect, 10.0) == 0.0);
  }
}

TEST_CASE("single edge and already-minimal nodes") {
  const GNNModel perfect = perfect_gnn();
  const WeightedGraph g = single_edge(7);
  const std::vector<double> start{0.0, unreached_distance(g)};
  CHECK(gnn_step(g, start, perfect) == std::vector<double>{0.0, 7.0});
  const std::vector<double> settled{0.0, 7.0};
  CHECK(gnn_step(g, settled, perfect) == settled);
}

TEST_CASE("messages put the node's own distance first, then neighbours by id") {
  WeightedGraph g;
  g.num_nodes = 4;
  g.edges = {{3, 0, 2}, {0, 1, 5}, {2, 0, 1}};
  const std::vector<double> states{0.0, 10.0, 20.0, 30.0};
  const auto messages = node_messages(g, g.adjacency(), states, 0);
  CHECK(messages == std::vector<double>{0.0, 15.0, 21.0, 32.0});
}

TEST_CASE("an untrained gate makes a positive error on a non-trivial graph") {
  RngStream rng(7);
  const GNNModel model = init_gnn(10, 1.0, rng);
  RngStream graphs(8);
  const WeightedGraph g = random_graph(8, 10, graphs);
  CHECK(eval_rollout(g, model, 10.0) > 0.0);
}

TEST_CASE("deduplicated teacher forcing reproduces the summed loss") {
  RngStream rng(9);
  const auto graphs = random_connected_graphs(4, 6, 10, rng);
  RngStream init(10);
  GNNModel model = init_gnn(3, 1.0, init);

  double direct = 0.0;
  for (const WeightedGraph& g : graphs) {
    const auto adj = g.adjacency();
    const auto tables = bellman_ford(g);
    for (std::size_t t = 0; t + 1 < tables.size(); ++t) {
      for (int v = 0; v < g.num_nodes; ++v) {
        const auto messages = node_messages(g, adj, tables[t], v);
        direct += std::fabs(run_min(messages, model.cell()) - tables[t + 1][std::size_t(v)]);
      }
    }
  }
  double bucketed = 0.0;
  double weight_total = 0.0;
  for (const MessageBucket& b : teacher_forced_buckets(graphs)) {
    for (std::size_t r = 0; r < b.targets.size(); ++r) {
      bucketed += b.weights[r] * std::fabs(run_min(b.messages.row(r), model.cell()) - b.targets[r]);
      weight_total += b.weights[r];
    }
  }
  CHECK(bucketed == doctest::Approx(direct).epsilon(1e-12));
  CHECK(weight_total <= 4 * 6 * 6);

  // The perfect gate has zero teacher-forced loss.
  const GNNModel perfect = perfect_gnn();
  for (const MessageBucket& b : teacher_forced_buckets(graphs)) {
    for (std::size_t r = 0; r < b.targets.size(); ++r) {
      CHECK(run_min(b.messages.row(r), perfect.cell()) == b.targets[r]);
    }
  }
}

TEST_CASE("teacher-forced training") {
  RngStream init(11);
  GNNModel model = init_gnn(10, 1.0, init);
  const std::vector<WeightedGraph> graphs{single_edge(3)};

  TrainConfig idle;
  idle.epochs = 0;
  const auto before = model.cell().params().v1.value;
  train_teacher_forced(model, graphs, idle);
  CHECK(model.cell().params().v1.value == before);

  TrainConfig cfg;
  cfg.epochs = 3000;
  const TrainReport report = train_teacher_forced(model, graphs, cfg);
  CHECK(report.ok);
  CHECK(report.final_loss < report.loss_curve.front());
  CHECK(eval_rollout(graphs[0], model, 3.0) < 0.05);
}

TEST_CASE("a gnn snapshot holds exactly one cell") {
  const Snapshot snap = to_snapshot(perfect_gnn().cell().params());
  std::size_t v1_entries = 0;
  for (const SnapshotEntry& e : snap.entries()) v1_entries += e.name == "v1";
  CHECK(v1_entries == 1);
  const GNNModel back(nsr_from_snapshot(snap));
  RngStream rng(12);
  const WeightedGraph g = random_graph(6, 10, rng);
  CHECK(gnn_rollout(g, back, 6) == bellman_ford(g).back());
}
