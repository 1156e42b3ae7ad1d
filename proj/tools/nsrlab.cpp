// nsrlab: command-line front end for the experiments, datasets and graph tools.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "nsrlab/experiments.hpp"
#include "nsrlab/gnn.hpp"
#include "nsrlab/graph.hpp"
#include "nsrlab/harness.hpp"
#include "nsrlab/models.hpp"
#include "nsrlab/selftest.hpp"
#include "nsrlab/snapshot.hpp"
#include "nsrlab/tasks.hpp"
#include "nsrlab/train.hpp"

namespace {

using namespace nsrlab;

const CLI::Validator kComparisonOp(
    [](std::string& text) -> std::string {
      return parse_comparison_op(text) ? "" : "unknown comparison '" + text + "'";
    },
    "gt|lt|ge|le|eq|ne", "comparison");

const CLI::Validator kSeedList(
    [](std::string& text) -> std::string {
      try {
        parse_seed_list(text);
        return "";
      } catch (const std::invalid_argument& e) {
        return e.what();
      }
    },
    "SEEDS", "seed list");

struct Common {
  std::string out;
  std::string seeds = "0..9";
  std::size_t workers = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "Output CSV path")->required();
  sub->add_option("--seeds", c.seeds, "Seeds: comma list of n or a..b (inclusive)")
      ->check(kSeedList);
  sub->add_option("--workers", c.workers,
                  "Parallel training runs (NSRLAB_WORKERS overrides)")
      ->check(CLI::PositiveNumber);
}

// Echoes every effective flag of `sub` next to the CSV, then runs the jobs.
int run_to_csv(const std::vector<Job>& jobs, const Common& c, const CLI::App& sub) {
  {
    std::ofstream echo(c.out + ".config.txt");
    if (!echo) throw std::runtime_error("cannot write " + c.out + ".config.txt");
    echo << "# nsrlab " << sub.get_name() << "\n";
    echo << "# rng " << RngStream::kAlgorithm << "\n";
    echo << sub.config_to_str(true, false);
  }
  std::ofstream csv(c.out);
  if (!csv) throw std::runtime_error("cannot write " + c.out);
  ResultWriter writer(csv);
  const SweepSummary summary = run_sweep(jobs, writer, worker_count(c.workers));
  for (const std::string& failure : summary.failures) std::cerr << "failed: " << failure << "\n";
  std::cerr << "wrote " << summary.rows << " rows from " << summary.jobs - summary.failures.size()
            << "/" << summary.jobs << " runs to " << c.out << "\n";
  return summary.failures.empty() ? 0 : 1;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural status register experiments"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  // compare
  Common compare_io;
  CompareOptions compare;
  std::string compare_op = "gt";
  auto* cmd_compare = app.add_subcommand("compare", "Train NSR and MLP on one comparison");
  cmd_compare->add_option("--op", compare_op, "Comparison")->check(kComparisonOp);
  cmd_compare->add_option("--lambda", compare.lambda, "Bit sharpness")->check(CLI::PositiveNumber);
  cmd_compare->add_option("--redundancy", compare.redundancy, "NSR units")
      ->check(CLI::Range(1, 1000));
  cmd_compare->add_option("--delta", compare.delta, "Input spacing")->check(CLI::PositiveNumber);
  cmd_compare->add_option("--epochs", compare.epochs, "Training epochs")->check(CLI::NonNegativeNumber);
  cmd_compare->add_option("--min-exp", compare.min_exp, "Smallest test magnitude 10^k");
  cmd_compare->add_option("--max-exp", compare.max_exp, "Largest test magnitude 10^k")
      ->check(CLI::Range(0, 15));
  bool compare_no_mlp = false;
  cmd_compare->add_flag("--no-mlp", compare_no_mlp, "Skip the MLP baseline");
  cmd_compare->add_option("--snapshot-dir", compare.snapshot_dir, "Save trained parameters here");
  add_common(cmd_compare, compare_io);

  // floats
  Common floats_io;
  FloatsOptions floats;
  std::vector<std::string> floats_ops{"gt", "eq"};
  auto* cmd_floats = app.add_subcommand("floats", "Delta x lambda grid");
  cmd_floats->add_option("--ops", floats_ops, "Comparisons")->delimiter(',')->check(kComparisonOp);
  cmd_floats->add_option("--deltas", floats.deltas, "Input spacings")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd_floats->add_option("--lambdas", floats.lambdas, "Bit sharpness values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  cmd_floats->add_option("--redundancy", floats.redundancy, "NSR units")->check(CLI::Range(1, 1000));
  cmd_floats->add_option("--epochs", floats.epochs, "Training epochs")->check(CLI::NonNegativeNumber);
  cmd_floats->add_option("--min-exp", floats.min_exp, "Smallest test magnitude 10^k");
  cmd_floats->add_option("--max-exp", floats.max_exp, "Largest test magnitude 10^k")
      ->check(CLI::Range(0, 15));
  add_common(cmd_floats, floats_io);

  // piecewise
  Common piecewise_io;
  PiecewiseOptions piecewise;
  std::string piecewise_fn = "abs";
  auto* cmd_piecewise = app.add_subcommand("piecewise", "Gated NSR vs MLP on abs or f");
  cmd_piecewise->add_option("--fn", piecewise_fn, "Target function")
      ->check(CLI::IsMember({"abs", "f"}));
  cmd_piecewise->add_option("--lambda", piecewise.lambda, "Bit sharpness")
      ->check(CLI::PositiveNumber);
  cmd_piecewise->add_option("--redundancy", piecewise.redundancy, "NSR units")
      ->check(CLI::Range(1, 1000));
  cmd_piecewise->add_option("--sparsity", piecewise.sparsity,
                            "Pull of branch weights toward -1, 0, 1")
      ->check(CLI::NonNegativeNumber);
  cmd_piecewise->add_option("--epochs", piecewise.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  cmd_piecewise->add_option("--min-exp", piecewise.min_exp, "Smallest test magnitude 3^k");
  cmd_piecewise->add_option("--max-exp", piecewise.max_exp, "Largest test magnitude 3^k")
      ->check(CLI::Range(0, 30));
  cmd_piecewise->add_option("--tolerance", piecewise.tolerance, "Absolute tolerance")
      ->check(CLI::PositiveNumber);
  bool piecewise_no_mlp = false;
  cmd_piecewise->add_flag("--no-mlp", piecewise_no_mlp, "Skip the MLP baseline");
  add_common(cmd_piecewise, piecewise_io);

  // redundancy
  Common redundancy_io;
  RedundancyOptions redundancy;
  auto* cmd_redundancy = app.add_subcommand("redundancy", "Sweep the number of NSR units");
  cmd_redundancy->add_option("--tasks", redundancy.tasks, "Comparisons and/or piecewise functions")
      ->delimiter(',')
      ->check(CLI::IsMember({"gt", "lt", "ge", "le", "eq", "ne", "abs", "f"}));
  cmd_redundancy->add_option("--r-min", redundancy.min_redundancy, "Smallest redundancy")
      ->check(CLI::Range(1, 1000));
  cmd_redundancy->add_option("--r-max", redundancy.max_redundancy, "Largest redundancy")
      ->check(CLI::Range(1, 1000));
  cmd_redundancy->add_option("--epochs", redundancy.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  add_common(cmd_redundancy, redundancy_io);

  // recurrent
  Common recurrent_io;
  RecurrentOptions recurrent;
  std::string recurrent_kind = "min";
  auto* cmd_recurrent = app.add_subcommand("recurrent", "Recurrent minimum or counting");
  cmd_recurrent->add_option("--kind", recurrent_kind, "Sequence task")
      ->check(CLI::IsMember({"min", "count"}));
  cmd_recurrent->add_option("--lengths", recurrent.lengths, "Test list lengths")
      ->delimiter(',')
      ->check(CLI::Range(2, 100000));
  cmd_recurrent->add_option("--magnitudes", recurrent.magnitudes, "Test magnitudes 3^k")
      ->delimiter(',')
      ->check(CLI::Range(0, 30));
  cmd_recurrent->add_option("--train-lists", recurrent.train_lists, "Training lists")
      ->check(CLI::PositiveNumber);
  cmd_recurrent->add_option("--train-length", recurrent.train_length, "Training list length")
      ->check(CLI::Range(2, 1000));
  cmd_recurrent->add_option("--test-lists", recurrent.test_lists, "Test lists per cell")
      ->check(CLI::PositiveNumber);
  cmd_recurrent->add_option("--lambda", recurrent.lambda, "Bit sharpness")
      ->check(CLI::PositiveNumber);
  cmd_recurrent->add_option("--redundancy", recurrent.redundancy, "NSR units")
      ->check(CLI::Range(1, 1000));
  cmd_recurrent->add_option("--epochs", recurrent.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  cmd_recurrent->add_option("--tolerance", recurrent.tolerance, "Absolute tolerance")
      ->check(CLI::PositiveNumber);
  bool recurrent_no_mlp = false;
  cmd_recurrent->add_flag("--no-mlp", recurrent_no_mlp, "Skip the MLP baseline");
  add_common(cmd_recurrent, recurrent_io);

  // sssp
  Common sssp_io;
  SsspOptions sssp;
  std::string sssp_scaling = "weights";
  auto* cmd_sssp = app.add_subcommand("sssp", "Shortest paths with a recurrent NSR aggregator");
  cmd_sssp->add_option("--scaling", sssp_scaling, "Scale edge weights or node count by 3^i")
      ->check(CLI::IsMember({"weights", "nodes"}));
  cmd_sssp->add_option("--scales", sssp.scales, "Exponents i")->delimiter(',')->check(CLI::Range(0, 8));
  cmd_sssp->add_option("--train-graphs", sssp.train_graphs, "Training graphs")
      ->check(CLI::PositiveNumber);
  cmd_sssp->add_option("--nodes", sssp.nodes, "Nodes per training graph")->check(CLI::Range(2, 100000));
  cmd_sssp->add_option("--max-weight", sssp.max_weight, "Largest training edge weight")
      ->check(CLI::PositiveNumber);
  cmd_sssp->add_option("--test-graphs", sssp.test_graphs, "Test graphs per scale")
      ->check(CLI::PositiveNumber);
  cmd_sssp->add_option("--lambda", sssp.lambda, "Bit sharpness")->check(CLI::PositiveNumber);
  cmd_sssp->add_option("--redundancy", sssp.redundancy, "NSR units")->check(CLI::Range(1, 1000));
  cmd_sssp->add_option("--epochs", sssp.epochs, "Training epochs")->check(CLI::NonNegativeNumber);
  cmd_sssp->add_flag("--shuffle-messages", sssp.shuffle_messages,
                     "Fold neighbour messages in random order at test time");
  cmd_sssp->add_option("--snapshot-dir", sssp.snapshot_dir, "Save trained cells here");
  add_common(cmd_sssp, sssp_io);

  // selftest
  std::uint64_t selftest_seed = 0;
  auto* cmd_selftest = app.add_subcommand("selftest", "Gradient, truth-table and oracle checks");
  cmd_selftest->add_option("--seed", selftest_seed, "Seed for random draws");

  // dataset
  TaskSpec dataset;
  std::string dataset_task = "comparison_train";
  std::string dataset_op = "gt";
  std::string dataset_fn = "abs";
  std::string dataset_kind = "min";
  int dataset_magnitude = -1;
  std::string dataset_out = "-";
  auto* cmd_dataset = app.add_subcommand("dataset", "Export a generated dataset as CSV");
  cmd_dataset->add_option("--task", dataset_task, "Dataset kind")
      ->check(CLI::IsMember({"comparison_train", "comparison_extrapolation", "piecewise_train",
                             "piecewise_extrapolation", "sequence"}));
  cmd_dataset->add_option("--op", dataset_op, "Comparison")->check(kComparisonOp);
  cmd_dataset->add_option("--fn", dataset_fn, "Piecewise function")->check(CLI::IsMember({"abs", "f"}));
  cmd_dataset->add_option("--kind", dataset_kind, "Sequence task")
      ->check(CLI::IsMember({"min", "count"}));
  cmd_dataset->add_option("--delta", dataset.delta, "Input spacing")->check(CLI::PositiveNumber);
  cmd_dataset->add_option("--base", dataset.base, "Magnitude base for comparisons")
      ->check(CLI::Range(2, 10));
  cmd_dataset->add_option("--magnitude", dataset_magnitude,
                          "Magnitude exponent k (-1: training range)")
      ->check(CLI::Range(-1, 30));
  cmd_dataset->add_option("--seq-len", dataset.seq_len, "List length")->check(CLI::Range(2, 100000));
  cmd_dataset->add_option("--num-lists", dataset.num_lists, "Number of lists")
      ->check(CLI::PositiveNumber);
  cmd_dataset->add_option("--seed", dataset.seed, "Seed");
  cmd_dataset->add_option("--out,-o", dataset_out, "Output path, - for stdout");

  // evaluate
  std::string eval_snapshot;
  std::string eval_op = "gt";
  double eval_delta = 1.0;
  std::uint64_t eval_seed = 0;
  auto* cmd_evaluate =
      app.add_subcommand("evaluate", "Accuracy of a saved NSR or MLP on the comparison suites");
  cmd_evaluate->add_option("--snapshot", eval_snapshot, "Parameter snapshot")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_evaluate->add_option("--op", eval_op, "Comparison")->check(kComparisonOp);
  cmd_evaluate->add_option("--delta", eval_delta, "Input spacing")->check(CLI::PositiveNumber);
  cmd_evaluate->add_option("--seed", eval_seed, "Seed of the test suites");

  // graph
  auto* cmd_graph = app.add_subcommand("graph", "Graph utilities");
  cmd_graph->require_subcommand(1);
  int graph_nodes = 10;
  std::int64_t graph_max_weight = 10;
  std::uint64_t graph_seed = 0;
  std::string graph_out = "-";
  auto* cmd_graph_gen = cmd_graph->add_subcommand("gen", "Write a random connected graph");
  cmd_graph_gen->add_option("--nodes", graph_nodes, "Node count")->check(CLI::Range(2, 1000000));
  cmd_graph_gen->add_option("--max-weight", graph_max_weight, "Largest edge weight")
      ->check(CLI::PositiveNumber);
  cmd_graph_gen->add_option("--seed", graph_seed, "Seed");
  cmd_graph_gen->add_option("--out,-o", graph_out, "Output path, - for stdout");
  std::string path_in;
  std::string path_snapshot;
  auto* cmd_graph_path =
      cmd_graph->add_subcommand("shortest-path", "Distances from the source as node,distance CSV");
  cmd_graph_path->add_option("--in,-i", path_in, "Graph file")->required()->check(CLI::ExistingFile);
  cmd_graph_path->add_option("--snapshot", path_snapshot,
                             "Use a saved GNN cell instead of Bellman-Ford")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*cmd_compare) {
      compare.op = *parse_comparison_op(compare_op);
      compare.include_mlp = !compare_no_mlp;
      compare.seeds = parse_seed_list(compare_io.seeds);
      return run_to_csv(compare_jobs(compare), compare_io, *cmd_compare);
    }
    if (*cmd_floats) {
      floats.ops.clear();
      for (const std::string& op : floats_ops) floats.ops.push_back(*parse_comparison_op(op));
      floats.seeds = parse_seed_list(floats_io.seeds);
      return run_to_csv(floats_jobs(floats), floats_io, *cmd_floats);
    }
    if (*cmd_piecewise) {
      piecewise.fn = *parse_piecewise_fn(piecewise_fn);
      piecewise.include_mlp = !piecewise_no_mlp;
      piecewise.seeds = parse_seed_list(piecewise_io.seeds);
      return run_to_csv(piecewise_jobs(piecewise), piecewise_io, *cmd_piecewise);
    }
    if (*cmd_redundancy) {
      if (redundancy.max_redundancy < redundancy.min_redundancy) {
        std::cerr << "--r-max must be >= --r-min\n";
        return 2;
      }
      redundancy.seeds = parse_seed_list(redundancy_io.seeds);
      return run_to_csv(redundancy_jobs(redundancy), redundancy_io, *cmd_redundancy);
    }
    if (*cmd_recurrent) {
      recurrent.kind = *parse_sequence_kind(recurrent_kind);
      recurrent.include_mlp = !recurrent_no_mlp;
      recurrent.seeds = parse_seed_list(recurrent_io.seeds);
      return run_to_csv(recurrent_jobs(recurrent), recurrent_io, *cmd_recurrent);
    }
    if (*cmd_sssp) {
      sssp.scaling = sssp_scaling == "nodes" ? SsspScaling::kNodes : SsspScaling::kWeights;
      sssp.seeds = parse_seed_list(sssp_io.seeds);
      return run_to_csv(sssp_jobs(sssp), sssp_io, *cmd_sssp);
    }
    if (*cmd_selftest) {
      bool ok = true;
      for (const SelfTestCheck& c : run_selftest(selftest_seed, default_bits())) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
        ok = ok && c.passed;
      }
      std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
      return ok ? 0 : 1;
    }
    if (*cmd_dataset) {
      if (dataset_task == "comparison_train") dataset.kind = TaskKind::kComparisonTrain;
      if (dataset_task == "comparison_extrapolation") dataset.kind = TaskKind::kComparisonExtrapolation;
      if (dataset_task == "piecewise_train") dataset.kind = TaskKind::kPiecewiseTrain;
      if (dataset_task == "piecewise_extrapolation") dataset.kind = TaskKind::kPiecewiseExtrapolation;
      if (dataset_task == "sequence") dataset.kind = TaskKind::kSequence;
      dataset.op = *parse_comparison_op(dataset_op);
      dataset.fn = *parse_piecewise_fn(dataset_fn);
      dataset.sequence = *parse_sequence_kind(dataset_kind);
      if (dataset_magnitude >= 0) dataset.magnitude_exp = dataset_magnitude;
      std::ofstream file;
      write_dataset_csv(open_output(dataset_out, file), generate(dataset));
      return 0;
    }
    if (*cmd_evaluate) {
      const Snapshot snap = load_snapshot(eval_snapshot);
      std::unique_ptr<Predictor> model;
      if (snap.find("v1") != nullptr) {
        model = std::make_unique<NsrModel>(nsr_from_snapshot(snap));
      } else {
        model = std::make_unique<MlpModel>(mlp_from_snapshot(snap));
      }
      if (model->input_dim() != 2) throw std::runtime_error("snapshot is not a two-input model");
      TaskSpec spec;
      spec.op = *parse_comparison_op(eval_op);
      spec.delta = eval_delta;
      spec.seed = eval_seed;
      std::cout << "set,accuracy\n";
      std::cout << "train," << format_double(eval_classification(*model, generate(spec))) << "\n";
      spec.kind = TaskKind::kComparisonExtrapolation;
      for (int k = 2; k <= 13; ++k) {
        spec.magnitude_exp = k;
        std::cout << "1e" << k << "," << format_double(eval_classification(*model, generate(spec)))
                  << "\n";
      }
      return 0;
    }
    if (*cmd_graph_gen) {
      RngStream rng(graph_seed);
      std::ofstream file;
      write_graph(open_output(graph_out, file), random_graph(graph_nodes, graph_max_weight, rng));
      return 0;
    }
    if (*cmd_graph_path) {
      std::ifstream in(path_in);
      const WeightedGraph g = read_graph(in);
      std::vector<double> dist;
      if (path_snapshot.empty()) {
        dist = bellman_ford(g).back();
      } else {
        const GNNModel model(nsr_from_snapshot(load_snapshot(path_snapshot)));
        dist = gnn_rollout(g, model, static_cast<std::size_t>(g.num_nodes));
      }
      std::cout << "node,distance\n";
      for (std::size_t v = 0; v < dist.size(); ++v) {
        std::cout << v << "," << format_double(dist[v]) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
