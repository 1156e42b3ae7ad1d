#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "nsrlab/rng.hpp"

namespace nsrlab {

struct Edge {
  int u = 0;
  int v = 0;
  std::int64_t weight = 1;

  bool operator==(const Edge&) const = default;
};

// Undirected graph with positive integer edge weights.
struct WeightedGraph {
  int num_nodes = 0;
  std::vector<Edge> edges;
  int source = 0;

  std::int64_t max_edge_weight() const;
  // Neighbour lists sorted by ascending neighbour id: (neighbour, weight).
  std::vector<std::vector<std::pair<int, std::int64_t>>> adjacency() const;

  bool operator==(const WeightedGraph&) const = default;
};

bool is_connected(const WeightedGraph& g);

// Random-attachment spanning tree (node i joins a uniform node < i), uniformly
// relabelled; every remaining pair is added with probability 1/(2n); weights
// uniform in [1, max_weight]; source 0.
WeightedGraph random_graph(int n, std::int64_t max_weight, RngStream& rng);

// Placeholder distance of unreached nodes: n * (max edge weight) + 1, larger
// than any simple path.
double unreached_distance(const WeightedGraph& g);

// d[0] is the initial table (0 at the source, unreached_distance elsewhere);
// d[t+1](v) = min(d[t](v), min_u d[t](u) + w(u, v)). Returns d[0..n].
std::vector<std::vector<double>> bellman_ford(const WeightedGraph& g);

// Text interchange: first line "n source", then one "u v w" line per edge.
void write_graph(std::ostream& out, const WeightedGraph& g);
// Throws std::runtime_error on malformed input.
WeightedGraph read_graph(std::istream& in);

}  // namespace nsrlab
