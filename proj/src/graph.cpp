#include "nsrlab/graph.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace nsrlab {

std::int64_t WeightedGraph::max_edge_weight() const {
  std::int64_t w = 0;
  for (const Edge& e : edges) w = std::max(w, e.weight);
  return w;
}

std::vector<std::vector<std::pair<int, std::int64_t>>> WeightedGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(num_nodes));
  for (const Edge& e : edges) {
    adj[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.weight);
    adj[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.weight);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

bool is_connected(const WeightedGraph& g) {
  if (g.num_nodes <= 0) return false;
  const auto adj = g.adjacency();
  std::vector<char> seen(static_cast<std::size_t>(g.num_nodes), 0);
  std::vector<int> stack{g.source};
  seen[static_cast<std::size_t>(g.source)] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == g.num_nodes;
}

WeightedGraph random_graph(int n, std::int64_t max_weight, RngStream& rng) {
  if (n < 2) throw std::invalid_argument("random_graph: n must be >= 2");
  if (max_weight < 1) throw std::invalid_argument("random_graph: max_weight must be >= 1");

  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::vector<char>> present(static_cast<std::size_t>(n),
                                         std::vector<char>(static_cast<std::size_t>(n), 0));
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i < n; ++i) {
    const int parent = static_cast<int>(rng.uniform_int(0, i - 1));
    pairs.emplace_back(parent, i);
    present[static_cast<std::size_t>(parent)][static_cast<std::size_t>(i)] = 1;
    present[static_cast<std::size_t>(i)][static_cast<std::size_t>(parent)] = 1;
  }
  const double p_extra = 1.0 / (2.0 * n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (present[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) continue;
      if (rng.bernoulli(p_extra)) pairs.emplace_back(a, b);
    }
  }
  rng.shuffle(label);

  WeightedGraph g;
  g.num_nodes = n;
  g.source = 0;
  for (const auto& [a, b] : pairs) {
    const int u = label[static_cast<std::size_t>(a)];
    const int v = label[static_cast<std::size_t>(b)];
    g.edges.push_back({std::min(u, v), std::max(u, v), rng.uniform_int(1, max_weight)});
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.u, x.v) < std::tie(y.u, y.v);
  });
  return g;
}

double unreached_distance(const WeightedGraph& g) {
  return static_cast<double>(g.num_nodes) * static_cast<double>(g.max_edge_weight()) + 1.0;
}

std::vector<std::vector<double>> bellman_ford(const WeightedGraph& g) {
  const auto n = static_cast<std::size_t>(g.num_nodes);
  std::vector<std::vector<double>> tables;
  tables.reserve(n + 1);
  std::vector<double> d(n, unreached_distance(g));
  d[static_cast<std::size_t>(g.source)] = 0.0;
  tables.push_back(d);
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> next = d;
    for (const Edge& e : g.edges) {
      const auto u = static_cast<std::size_t>(e.u);
      const auto v = static_cast<std::size_t>(e.v);
      const double w = static_cast<double>(e.weight);
      next[v] = std::min(next[v], d[u] + w);
      next[u] = std::min(next[u], d[v] + w);
    }
    d = std::move(next);
    tables.push_back(d);
  }
  return tables;
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  out << g.num_nodes << " " << g.source << "\n";
  for (const Edge& e : g.edges) out << e.u << " " << e.v << " " << e.weight << "\n";
}

WeightedGraph read_graph(std::istream& in) {
  WeightedGraph g;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_graph: missing header line");
  {
    std::istringstream header(line);
    if (!(header >> g.num_nodes >> g.source) || g.num_nodes < 1 || g.source < 0 ||
        g.source >= g.num_nodes) {
      throw std::runtime_error("read_graph: bad header '" + line + "'");
    }
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    Edge e;
    if (!(row >> e.u >> e.v >> e.weight) || e.u < 0 || e.v < 0 || e.u >= g.num_nodes ||
        e.v >= g.num_nodes || e.u == e.v || e.weight < 1) {
      throw std::runtime_error("read_graph: bad edge on line " + std::to_string(line_no));
    }
    g.edges.push_back(e);
  }
  return g;
}

}  // namespace nsrlab
