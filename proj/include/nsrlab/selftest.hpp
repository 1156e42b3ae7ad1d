#pragma once

// Built-in consistency checks behind `nsrlab selftest`.

#include <cstdint>
#include <string>
#include <vector>

#include "nsrlab/comparison.hpp"
#include "nsrlab/graph.hpp"

namespace nsrlab {

// The relaxed bits used by the truth-table check; replaceable so that a
// corrupted relaxation can be shown to fail it.
struct BitFunctions {
  double (*sign_bit)(double x, double lambda);
  double (*zero_bit)(double x, double lambda);
};
BitFunctions default_bits();

// Fraction of integer pairs in [-range, range]^2 that the hand-weighted NSR
// for `op` classifies correctly, with z recomputed from `bits`.
double nsr_truth_table_accuracy(ComparisonOp op, const BitFunctions& bits, int range = 20);
// Same for the hand-weighted MLP.
double mlp_truth_table_accuracy(ComparisonOp op, int range = 20);

// Single-source distances by Dijkstra's algorithm.
std::vector<double> dijkstra(const WeightedGraph& g);

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelfTestCheck> run_selftest(std::uint64_t seed, const BitFunctions& bits);

}  // namespace nsrlab
