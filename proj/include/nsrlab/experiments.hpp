#pragma once

// Experiment drivers. Each returns one Job per independent training run;
// run_sweep executes them and collects the RunResult rows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsrlab/comparison.hpp"
#include "nsrlab/harness.hpp"
#include "nsrlab/tasks.hpp"

namespace nsrlab {

struct CompareOptions {
  ComparisonOp op = ComparisonOp::kGT;
  double lambda = 1.0;
  std::size_t redundancy = 10;
  double delta = 1.0;
  int epochs = 50000;
  int min_exp = 2;
  int max_exp = 13;
  bool include_mlp = true;
  // When set, trained parameters are saved there as <model>_<op>_seed<N>.txt.
  std::string snapshot_dir;
  std::vector<std::uint64_t> seeds;
};

// Per seed: train NSR (and MLP) on the comparison set; one train-accuracy row
// and one row per extrapolation magnitude 10^min_exp..10^max_exp per model.
std::vector<Job> compare_jobs(const CompareOptions& opts);

struct FloatsOptions {
  std::vector<ComparisonOp> ops{ComparisonOp::kGT, ComparisonOp::kEQ};
  std::vector<double> deltas{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  std::vector<double> lambdas{1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  std::size_t redundancy = 10;
  int epochs = 50000;
  int min_exp = 2;
  int max_exp = 13;
  std::vector<std::uint64_t> seeds;
};

// NSR only, one job per (op, delta, lambda, seed).
std::vector<Job> floats_jobs(const FloatsOptions& opts);

struct PiecewiseOptions {
  PiecewiseFn fn = PiecewiseFn::kAbs;
  double lambda = 1.0;
  std::size_t redundancy = 10;
  // Weight of the pull of the branch weights toward {-1, 0, 1}.
  double sparsity = 0.1;
  int epochs = 50000;
  int min_exp = 2;
  int max_exp = 13;
  double tolerance = 0.1;
  bool include_mlp = true;
  std::vector<std::uint64_t> seeds;
};

// Gated NSR against an MLP with linear output; accuracy within `tolerance`
// on the training set and at magnitudes 3^min_exp..3^max_exp.
std::vector<Job> piecewise_jobs(const PiecewiseOptions& opts);

struct RedundancyOptions {
  // Each entry is a comparison op name or a piecewise function name.
  std::vector<std::string> tasks{"eq", "ne", "f"};
  std::size_t min_redundancy = 1;
  std::size_t max_redundancy = 15;
  int epochs = 50000;
  std::vector<std::uint64_t> seeds;
};

// NSR only, one job per (task, r, seed); rows as for compare / piecewise.
// Throws std::invalid_argument on an unknown task name.
std::vector<Job> redundancy_jobs(const RedundancyOptions& opts);

struct RecurrentOptions {
  SequenceKind kind = SequenceKind::kMin;
  std::vector<std::size_t> lengths{5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  // Test magnitudes 3^k; the training range itself is always evaluated too.
  std::vector<int> magnitudes{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::size_t train_lists = 500;
  std::size_t train_length = 5;
  std::size_t test_lists = 50;
  double lambda = 1.0;
  std::size_t redundancy = 10;
  int epochs = 50000;
  double tolerance = 0.1;
  bool include_mlp = true;
  std::vector<std::uint64_t> seeds;
};

std::vector<Job> recurrent_jobs(const RecurrentOptions& opts);

enum class SsspScaling { kWeights, kNodes };

struct SsspOptions {
  SsspScaling scaling = SsspScaling::kWeights;
  // Test configurations scale max weight (or node count) by 3^i.
  std::vector<int> scales{0, 1, 2, 3};
  std::size_t train_graphs = 25;
  int nodes = 10;
  std::int64_t max_weight = 10;
  std::size_t test_graphs = 10;
  double lambda = 1.0;
  std::size_t redundancy = 10;
  int epochs = 50000;
  bool shuffle_messages = false;
  // When set, the trained cell is saved there as gnn_seed<N>.txt.
  std::string snapshot_dir;
  std::vector<std::uint64_t> seeds;
};

// One job per seed: teacher-forced training, then the mean normalized MAE of
// free rollouts per scale.
std::vector<Job> sssp_jobs(const SsspOptions& opts);

// Mean of `value` over rows matching every given field (NaN rows count as
// failures and are skipped). Returns nullopt when nothing matches.
struct ResultFilter {
  std::optional<std::string> task;
  std::optional<std::string> op;
  std::optional<std::string> model;
  std::optional<int> magnitude_exp;
  std::optional<std::size_t> seq_len;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<std::size_t> redundancy;
  std::optional<std::uint64_t> seed;
};
bool matches(const RunResult& r, const ResultFilter& f);
std::optional<double> mean_value(const std::vector<RunResult>& rows, const ResultFilter& f);

}  // namespace nsrlab
