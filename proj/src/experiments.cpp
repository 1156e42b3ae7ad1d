#include "nsrlab/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <stdexcept>

#include "nsrlab/gnn.hpp"
#include "nsrlab/models.hpp"
#include "nsrlab/snapshot.hpp"
#include "nsrlab/train.hpp"

namespace nsrlab {

namespace {

constexpr double kFailed = std::numeric_limits<double>::quiet_NaN();

enum class ModelKind { kNsr, kMlp };

const char* model_label(ModelKind kind) { return kind == ModelKind::kNsr ? "nsr" : "mlp"; }

TrainConfig config_for(int epochs) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  return cfg;
}

std::string seed_label(std::uint64_t seed) { return "seed " + std::to_string(seed); }

// --- comparisons ---

struct ComparisonRun {
  ComparisonOp op;
  double delta;
  double lambda;
  std::size_t redundancy;
  int epochs;
  int min_exp;
  int max_exp;
  std::string snapshot_dir;
};

void save_model_snapshot(const std::string& dir, const std::string& stem, Predictor& model) {
  if (dir.empty()) return;
  const std::string path = (std::filesystem::path(dir) / (stem + ".txt")).string();
  if (auto* nsr = dynamic_cast<NsrModel*>(&model)) {
    save_snapshot(path, to_snapshot(nsr->params()));
  } else if (auto* mlp = dynamic_cast<MlpModel*>(&model)) {
    save_snapshot(path, to_snapshot(mlp->params()));
  }
}

std::vector<RunResult> comparison_rows(const ComparisonRun& run, ModelKind kind,
                                       std::uint64_t seed) {
  const RngStream root(seed);
  std::unique_ptr<Predictor> model;
  if (kind == ModelKind::kNsr) {
    RngStream init = root.split("nsr-init");
    model = std::make_unique<NsrModel>(init_params(2, run.redundancy, run.lambda, init));
  } else {
    RngStream init = root.split("mlp-init");
    model = std::make_unique<MlpModel>(init_mlp(2, init));
  }

  TaskSpec spec;
  spec.op = run.op;
  spec.delta = run.delta;
  spec.seed = seed;
  spec.kind = TaskKind::kComparisonTrain;
  const Dataset train_set = generate(spec);
  const TrainReport report = train(*model, train_set, config_for(run.epochs));
  save_model_snapshot(run.snapshot_dir,
                      std::string(model_label(kind)) + "_" + std::string(to_string(run.op)) +
                          "_seed" + std::to_string(seed),
                      *model);

  RunResult base;
  base.op = std::string(to_string(run.op));
  base.model = model_label(kind);
  base.seed = seed;
  base.delta = run.delta;
  if (kind == ModelKind::kNsr) {
    base.lambda = run.lambda;
    base.redundancy = run.redundancy;
  }

  std::vector<RunResult> rows;
  RunResult train_row = base;
  train_row.task = std::string(to_string(TaskKind::kComparisonTrain));
  train_row.value = report.ok ? eval_classification(*model, train_set) : kFailed;
  rows.push_back(train_row);

  spec.kind = TaskKind::kComparisonExtrapolation;
  spec.base = 10;
  for (int k = run.min_exp; k <= run.max_exp; ++k) {
    spec.magnitude_exp = k;
    RunResult row = base;
    row.task = std::string(to_string(TaskKind::kComparisonExtrapolation));
    row.magnitude_base = 10;
    row.magnitude_exp = k;
    row.value = report.ok ? eval_classification(*model, generate(spec)) : kFailed;
    rows.push_back(row);
  }
  return rows;
}

// --- piecewise ---

struct PiecewiseRun {
  PiecewiseFn fn;
  double lambda;
  std::size_t redundancy;
  double sparsity;
  int epochs;
  int min_exp;
  int max_exp;
  double tolerance;
};

std::vector<RunResult> piecewise_rows(const PiecewiseRun& run, ModelKind kind,
                                      std::uint64_t seed) {
  const RngStream root(seed);
  const std::size_t arity = piecewise_arity(run.fn);
  std::unique_ptr<Predictor> model;
  if (kind == ModelKind::kNsr) {
    RngStream init = root.split("nsr-init");
    auto gated = std::make_unique<GatedNsrModel>(
        gated_piecewise_model(arity, run.redundancy, run.lambda, init));
    gated->sparsity = run.sparsity;
    model = std::move(gated);
  } else {
    RngStream init = root.split("mlp-init");
    model = std::make_unique<MlpModel>(init_mlp(arity, init, MlpOutput::kLinear));
  }

  TaskSpec spec;
  spec.fn = run.fn;
  spec.seed = seed;
  spec.kind = TaskKind::kPiecewiseTrain;
  const Dataset train_set = generate(spec);
  const TrainReport report = train(*model, train_set, config_for(run.epochs));

  RunResult base;
  base.op = std::string(to_string(run.fn));
  base.model = model_label(kind);
  base.seed = seed;
  if (kind == ModelKind::kNsr) {
    base.lambda = run.lambda;
    base.redundancy = run.redundancy;
  }

  std::vector<RunResult> rows;
  RunResult train_row = base;
  train_row.task = std::string(to_string(TaskKind::kPiecewiseTrain));
  train_row.value = report.ok ? eval_regression(*model, train_set, run.tolerance) : kFailed;
  rows.push_back(train_row);

  spec.kind = TaskKind::kPiecewiseExtrapolation;
  for (int k = run.min_exp; k <= run.max_exp; ++k) {
    spec.magnitude_exp = k;
    RunResult row = base;
    row.task = std::string(to_string(TaskKind::kPiecewiseExtrapolation));
    row.magnitude_base = 3;
    row.magnitude_exp = k;
    row.value = report.ok ? eval_regression(*model, generate(spec), run.tolerance) : kFailed;
    rows.push_back(row);
  }
  return rows;
}

// --- recurrent ---

std::vector<RunResult> recurrent_rows(const RecurrentOptions& opts, ModelKind kind,
                                      std::uint64_t seed) {
  const RngStream root(seed);
  std::unique_ptr<Predictor> gate;
  if (kind == ModelKind::kNsr) {
    RngStream init = root.split("nsr-init");
    gate = std::make_unique<NsrModel>(init_params(2, opts.redundancy, opts.lambda, init));
  } else {
    RngStream init = root.split("mlp-init");
    gate = std::make_unique<MlpModel>(init_mlp(2, init));
  }

  TaskSpec spec;
  spec.kind = TaskKind::kSequence;
  spec.sequence = opts.kind;
  spec.seed = seed;
  spec.num_lists = opts.train_lists;
  spec.seq_len = opts.train_length;
  const Dataset train_set = generate(spec);
  const bool is_min = opts.kind == SequenceKind::kMin;

  const auto params = gate->parameters();
  const TrainReport report = train(
      params,
      [&](ad::Tape& tape) {
        const ad::Var out = is_min ? min_rollout(tape, *gate, train_set.inputs)
                                   : count_rollout(tape, *gate, train_set.inputs);
        const ad::Var target = tape.constant(Shape{train_set.size(), 1}, train_set.targets);
        return ad::mean(ad::abs(out - target));
      },
      config_for(opts.epochs));

  RunResult base;
  base.task = std::string(to_string(TaskKind::kSequence));
  base.op = std::string(to_string(opts.kind));
  base.model = model_label(kind);
  base.seed = seed;
  if (kind == ModelKind::kNsr) {
    base.lambda = opts.lambda;
    base.redundancy = opts.redundancy;
  }

  std::vector<std::optional<int>> magnitudes{std::nullopt};
  for (int k : opts.magnitudes) magnitudes.emplace_back(k);

  std::vector<RunResult> rows;
  spec.num_lists = opts.test_lists;
  for (std::size_t len : opts.lengths) {
    for (const std::optional<int>& k : magnitudes) {
      RunResult row = base;
      row.seq_len = len;
      if (k) {
        row.magnitude_base = 3;
        row.magnitude_exp = *k;
      }
      if (report.ok) {
        spec.seq_len = len;
        spec.magnitude_exp = k;
        const Dataset test = generate(spec);
        std::vector<double> predictions(test.size());
        for (std::size_t r = 0; r < test.size(); ++r) {
          predictions[r] = is_min ? run_min(test.inputs.row(r), *gate)
                                  : run_count(test.inputs.row(r), *gate);
        }
        row.value = regression_accuracy(predictions, test.targets, opts.tolerance);
      } else {
        row.value = kFailed;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

// --- shortest paths ---

std::int64_t ipow3(int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= 3;
  return out;
}

std::vector<RunResult> sssp_rows(const SsspOptions& opts, std::uint64_t seed) {
  const RngStream root(seed);
  RngStream init = root.split("nsr-init");
  GNNModel model = init_gnn(opts.redundancy, opts.lambda, init);
  RngStream graph_rng = root.split("sssp-train");
  const std::vector<WeightedGraph> graphs =
      random_connected_graphs(opts.train_graphs, opts.nodes, opts.max_weight, graph_rng);
  const TrainReport report = train_teacher_forced(model, graphs, config_for(opts.epochs));
  save_model_snapshot(opts.snapshot_dir, "gnn_seed" + std::to_string(seed), model.cell());

  const bool by_weight = opts.scaling == SsspScaling::kWeights;
  std::vector<RunResult> rows;
  for (int i : opts.scales) {
    if (i < 0) throw std::invalid_argument("sssp: scale exponents must be >= 0");
    RunResult row;
    row.task = by_weight ? "sssp_weights" : "sssp_nodes";
    row.op = "min";
    row.model = "nsr";
    row.seed = seed;
    row.magnitude_base = 3;
    row.magnitude_exp = i;
    row.lambda = opts.lambda;
    row.redundancy = opts.redundancy;
    row.metric = "normalized_mae";
    if (report.ok) {
      const std::int64_t max_weight = by_weight ? opts.max_weight * ipow3(i) : opts.max_weight;
      const int nodes = by_weight ? opts.nodes : opts.nodes * static_cast<int>(ipow3(i));
      RngStream test_rng = root.split("sssp-test").split(static_cast<std::uint64_t>(i));
      RngStream order_rng = root.split("sssp-order").split(static_cast<std::uint64_t>(i));
      const auto tests = random_connected_graphs(opts.test_graphs, nodes, max_weight, test_rng);
      double total = 0.0;
      for (const WeightedGraph& g : tests) {
        total += eval_rollout(g, model, static_cast<double>(max_weight),
                              opts.shuffle_messages ? &order_rng : nullptr);
      }
      row.value = total / static_cast<double>(tests.size());
    } else {
      row.value = kFailed;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::vector<Job> compare_jobs(const CompareOptions& opts) {
  const ComparisonRun run{opts.op,     opts.delta,   opts.lambda,  opts.redundancy,
                          opts.epochs, opts.min_exp, opts.max_exp, opts.snapshot_dir};
  std::vector<Job> jobs;
  for (std::uint64_t seed : opts.seeds) {
    jobs.push_back({"compare " + std::string(to_string(opts.op)) + " " + seed_label(seed),
                    [run, seed, mlp = opts.include_mlp]() {
                      std::vector<RunResult> rows = comparison_rows(run, ModelKind::kNsr, seed);
                      if (mlp) {
                        const auto more = comparison_rows(run, ModelKind::kMlp, seed);
                        rows.insert(rows.end(), more.begin(), more.end());
                      }
                      return rows;
                    }});
  }
  return jobs;
}

std::vector<Job> floats_jobs(const FloatsOptions& opts) {
  std::vector<Job> jobs;
  for (ComparisonOp op : opts.ops) {
    for (double delta : opts.deltas) {
      for (double lambda : opts.lambdas) {
        const ComparisonRun run{op,          delta,        lambda,       opts.redundancy,
                                opts.epochs, opts.min_exp, opts.max_exp, {}};
        for (std::uint64_t seed : opts.seeds) {
          jobs.push_back({"floats " + std::string(to_string(op)) + " delta " +
                              format_double(delta) + " lambda " + format_double(lambda) + " " +
                              seed_label(seed),
                          [run, seed]() { return comparison_rows(run, ModelKind::kNsr, seed); }});
        }
      }
    }
  }
  return jobs;
}

std::vector<Job> piecewise_jobs(const PiecewiseOptions& opts) {
  const PiecewiseRun run{opts.fn,     opts.lambda,  opts.redundancy, opts.sparsity,
                         opts.epochs, opts.min_exp, opts.max_exp,    opts.tolerance};
  std::vector<Job> jobs;
  for (std::uint64_t seed : opts.seeds) {
    jobs.push_back({"piecewise " + std::string(to_string(opts.fn)) + " " + seed_label(seed),
                    [run, seed, mlp = opts.include_mlp]() {
                      std::vector<RunResult> rows = piecewise_rows(run, ModelKind::kNsr, seed);
                      if (mlp) {
                        const auto more = piecewise_rows(run, ModelKind::kMlp, seed);
                        rows.insert(rows.end(), more.begin(), more.end());
                      }
                      return rows;
                    }});
  }
  return jobs;
}

std::vector<Job> redundancy_jobs(const RedundancyOptions& opts) {
  if (opts.min_redundancy < 1 || opts.max_redundancy < opts.min_redundancy) {
    throw std::invalid_argument("redundancy: need 1 <= min <= max");
  }
  std::vector<Job> jobs;
  for (const std::string& task : opts.tasks) {
    const auto op = parse_comparison_op(task);
    const auto fn = parse_piecewise_fn(task);
    if (!op && !fn) throw std::invalid_argument("redundancy: unknown task '" + task + "'");
    for (std::size_t r = opts.min_redundancy; r <= opts.max_redundancy; ++r) {
      for (std::uint64_t seed : opts.seeds) {
        const std::string label =
            "redundancy " + task + " r " + std::to_string(r) + " " + seed_label(seed);
        if (op) {
          const ComparisonRun run{*op, 1.0, 1.0, r, opts.epochs, 2, 13, {}};
          jobs.push_back({label, [run, seed]() {
                            return comparison_rows(run, ModelKind::kNsr, seed);
                          }});
        } else {
          const PiecewiseRun run{*fn, 1.0, r, PiecewiseOptions{}.sparsity, opts.epochs, 2, 13,
                                 0.1};
          jobs.push_back({label, [run, seed]() {
                            return piecewise_rows(run, ModelKind::kNsr, seed);
                          }});
        }
      }
    }
  }
  return jobs;
}

std::vector<Job> recurrent_jobs(const RecurrentOptions& opts) {
  std::vector<Job> jobs;
  for (std::uint64_t seed : opts.seeds) {
    jobs.push_back({"recurrent " + std::string(to_string(opts.kind)) + " " + seed_label(seed),
                    [opts, seed]() {
                      std::vector<RunResult> rows = recurrent_rows(opts, ModelKind::kNsr, seed);
                      if (opts.include_mlp) {
                        const auto more = recurrent_rows(opts, ModelKind::kMlp, seed);
                        rows.insert(rows.end(), more.begin(), more.end());
                      }
                      return rows;
                    }});
  }
  return jobs;
}

std::vector<Job> sssp_jobs(const SsspOptions& opts) {
  std::vector<Job> jobs;
  for (std::uint64_t seed : opts.seeds) {
    jobs.push_back({"sssp " + seed_label(seed), [opts, seed]() { return sssp_rows(opts, seed); }});
  }
  return jobs;
}

bool matches(const RunResult& r, const ResultFilter& f) {
  if (f.task && r.task != *f.task) return false;
  if (f.op && r.op != *f.op) return false;
  if (f.model && r.model != *f.model) return false;
  if (f.magnitude_exp && r.magnitude_exp != f.magnitude_exp) return false;
  if (f.seq_len && r.seq_len != f.seq_len) return false;
  if (f.delta && r.delta != f.delta) return false;
  if (f.lambda && r.lambda != f.lambda) return false;
  if (f.redundancy && r.redundancy != f.redundancy) return false;
  if (f.seed && r.seed != *f.seed) return false;
  return true;
}

std::optional<double> mean_value(const std::vector<RunResult>& rows, const ResultFilter& f) {
  double total = 0.0;
  std::size_t count = 0;
  for (const RunResult& r : rows) {
    if (!matches(r, f) || !std::isfinite(r.value)) continue;
    total += r.value;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return total / static_cast<double>(count);
}

}  // namespace nsrlab
