#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nsrlab/experiments.hpp"
#include "nsrlab/gnn.hpp"
#include "nsrlab/graph.hpp"
#include "nsrlab/harness.hpp"
#include "nsrlab/nsr.hpp"
#include "nsrlab/selftest.hpp"
#include "nsrlab/snapshot.hpp"
#include "nsrlab/tasks.hpp"

namespace py = pybind11;
using namespace nsrlab;

namespace {

ComparisonOp op_from(const std::string& name) {
  const auto op = parse_comparison_op(name);
  if (!op) throw py::value_error("unknown comparison '" + name + "'");
  return *op;
}

py::list to_python(const std::vector<RunResult>& rows) {
  py::list out;
  for (const RunResult& r : rows) {
    py::dict d;
    d["task"] = r.task;
    d["op"] = r.op;
    d["model"] = r.model;
    d["seed"] = r.seed;
    d["magnitude_base"] = r.magnitude_base;
    d["magnitude_exp"] = r.magnitude_exp;
    d["seq_len"] = r.seq_len;
    d["delta"] = r.delta;
    d["lambda"] = r.lambda;
    d["redundancy"] = r.redundancy;
    d["metric"] = r.metric;
    d["value"] = r.value;
    out.append(d);
  }
  return out;
}

std::vector<RunResult> run(const std::vector<Job>& jobs, std::size_t workers) {
  std::stringstream csv;
  ResultWriter writer(csv);
  {
    py::gil_scoped_release release;
    run_sweep(jobs, writer, workers);
  }
  csv.seekg(0);
  return read_results_csv(csv);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Neural status register experiments";

  m.def("sign_bit", &sign_bit_hat, py::arg("x"), py::arg("lam"));
  m.def("zero_bit", &zero_bit_hat, py::arg("x"), py::arg("lam"));

  py::class_<NSRParams>(m, "NSRParams")
      .def_property_readonly("input_dim", &NSRParams::input_dim)
      .def_property_readonly("redundancy", &NSRParams::redundancy)
      .def_property_readonly("learnable_count", &NSRParams::learnable_count)
      .def_readwrite("lam", &NSRParams::lambda)
      .def("forward",
           [](const NSRParams& p, const std::vector<double>& x) {
             if (x.size() != p.input_dim()) throw py::value_error("wrong input length");
             const NSRTrace t = nsr_forward(x, p);
             return py::make_tuple(t.y, t.ybar);
           })
      .def("to_snapshot", [](const NSRParams& p) {
        std::ostringstream out;
        to_snapshot(p).write(out);
        return out.str();
      });

  m.def("init_params",
        [](std::size_t n, std::size_t r, double lam, std::uint64_t seed) {
          RngStream rng(seed);
          return init_params(n, r, lam, rng);
        },
        py::arg("n"), py::arg("r"), py::arg("lam") = 1.0, py::arg("seed") = 0);
  m.def("hand_weighted_nsr",
        [](const std::string& op, double lam, double gain) {
          return hand_weighted_nsr(op_from(op), lam, gain);
        },
        py::arg("op"), py::arg("lam") = 1.0, py::arg("gain") = 1.0);
  m.def("nsr_from_snapshot", [](const std::string& text) {
    std::istringstream in(text);
    return nsr_from_snapshot(Snapshot::read(in));
  });

  m.def("comparison_dataset",
        [](const std::string& op, double delta, std::optional<int> magnitude, std::uint64_t seed) {
          TaskSpec spec;
          spec.op = op_from(op);
          spec.delta = delta;
          spec.seed = seed;
          if (magnitude) {
            spec.kind = TaskKind::kComparisonExtrapolation;
            spec.magnitude_exp = magnitude;
          }
          const Dataset d = generate(spec);
          std::vector<std::vector<double>> rows;
          for (std::size_t r = 0; r < d.size(); ++r) {
            rows.emplace_back(d.inputs.row(r).begin(), d.inputs.row(r).end());
          }
          return py::make_tuple(rows, d.targets);
        },
        py::arg("op"), py::arg("delta") = 1.0, py::arg("magnitude") = py::none(),
        py::arg("seed") = 0);

  m.def("compare",
        [](const std::string& op, int epochs, const std::vector<std::uint64_t>& seeds,
           double lam, std::size_t redundancy, double delta, bool include_mlp,
           std::size_t workers) {
          CompareOptions opts;
          opts.op = op_from(op);
          opts.epochs = epochs;
          opts.seeds = seeds;
          opts.lambda = lam;
          opts.redundancy = redundancy;
          opts.delta = delta;
          opts.include_mlp = include_mlp;
          return to_python(run(compare_jobs(opts), workers));
        },
        py::arg("op"), py::arg("epochs"), py::arg("seeds"), py::arg("lam") = 1.0,
        py::arg("redundancy") = 10, py::arg("delta") = 1.0, py::arg("include_mlp") = true,
        py::arg("workers") = 1);

  m.def("random_graph",
        [](int n, std::int64_t max_weight, std::uint64_t seed) {
          RngStream rng(seed);
          std::ostringstream out;
          write_graph(out, random_graph(n, max_weight, rng));
          return out.str();
        },
        py::arg("n"), py::arg("max_weight") = 10, py::arg("seed") = 0,
        "Random connected graph in the text edge-list format.");
  m.def("shortest_paths",
        [](const std::string& graph_text, bool perfect_gnn_rollout) {
          std::istringstream in(graph_text);
          const WeightedGraph g = read_graph(in);
          if (perfect_gnn_rollout) {
            return gnn_rollout(g, perfect_gnn(), static_cast<std::size_t>(g.num_nodes));
          }
          return bellman_ford(g).back();
        },
        py::arg("graph"), py::arg("perfect_gnn_rollout") = false);

  m.def("selftest", [](std::uint64_t seed) {
    py::list out;
    for (const SelfTestCheck& c : run_selftest(seed, default_bits())) {
      out.append(py::make_tuple(c.name, c.passed, c.detail));
    }
    return out;
  }, py::arg("seed") = 0);
}
