#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nsrlab/experiments.hpp"
#include "nsrlab/harness.hpp"
#include "nsrlab/mlp.hpp"
#include "nsrlab/nsr.hpp"
#include "nsrlab/snapshot.hpp"

using namespace nsrlab;

namespace {

std::vector<RunResult> sweep_rows(const std::vector<Job>& jobs, std::size_t workers,
                                  SweepSummary* summary = nullptr) {
  std::stringstream csv;
  ResultWriter writer(csv);
  const SweepSummary s = run_sweep(jobs, writer, workers);
  if (summary) *summary = s;
  csv.seekg(0);
  return read_results_csv(csv);
}

}  // namespace

TEST_CASE("result rows round trip through csv") {
  RunResult r;
  r.task = "comparison_extrapolation";
  r.op = "gt";
  r.model = "nsr";
  r.seed = 17;
  r.magnitude_base = 10;
  r.magnitude_exp = 6;
  r.delta = 0.001;
  r.lambda = 1000;
  r.redundancy = 10;
  r.value = 0.9090909090909091;
  const std::string row = to_csv_row(r);
  CHECK(row == "comparison_extrapolation,gt,nsr,17,10,6,,0.001,1000,10,accuracy,0.9090909090909091");
  const RunResult back = parse_csv_row(row);
  CHECK(back.magnitude_exp == 6);
  CHECK_FALSE(back.seq_len);
  CHECK(back.value == r.value);
  CHECK(to_csv_row(back) == row);

  RunResult failed = r;
  failed.value = std::nan("");
  const std::string failed_row = to_csv_row(failed);
  CHECK(failed_row.back() == ',');
  CHECK(std::isnan(parse_csv_row(failed_row).value));
  CHECK_THROWS(parse_csv_row("a,b,c"));
}

TEST_CASE("writer emits the header once") {
  std::ostringstream out;
  ResultWriter writer(out);
  writer.write({});
  CHECK(out.str() == std::string(kRunResultHeader) + "\n");
}

TEST_CASE("seed lists") {
  CHECK(parse_seed_list("0..3") == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(parse_seed_list("5,1..2,9") == std::vector<std::uint64_t>{5, 1, 2, 9});
  CHECK(parse_seed_list("").empty());
  CHECK_THROWS_AS(parse_seed_list("3..1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_seed_list("a"), std::invalid_argument);
  CHECK_THROWS_AS(parse_seed_list("1,"), std::invalid_argument);
}

TEST_CASE("NSRLAB_WORKERS overrides the worker count") {
  ::unsetenv("NSRLAB_WORKERS");
  CHECK(worker_count(3) == 3);
  ::setenv("NSRLAB_WORKERS", "5", 1);
  CHECK(worker_count(3) == 5);
  ::setenv("NSRLAB_WORKERS", "junk", 1);
  CHECK(worker_count(3) == 3);
  ::unsetenv("NSRLAB_WORKERS");
}

TEST_CASE("sweep keeps job order, records failures and continues") {
  std::vector<Job> jobs;
  for (int i = 0; i < 12; ++i) {
    jobs.push_back({"job " + std::to_string(i), [i]() {
                      if (i == 4) throw std::runtime_error("boom");
                      // Later jobs finish first to exercise reordering.
                      std::this_thread::sleep_for(std::chrono::milliseconds(12 - i));
                      RunResult r;
                      r.task = "t";
                      r.seed = static_cast<std::uint64_t>(i);
                      r.value = i;
                      return std::vector<RunResult>{r, r};
                    }});
  }
  SweepSummary summary;
  const auto rows = sweep_rows(jobs, 4, &summary);
  CHECK(summary.jobs == 12);
  REQUIRE(summary.failures.size() == 1);
  CHECK(summary.failures[0] == "job 4: boom");
  CHECK(rows.size() == 22);
  CHECK(summary.rows == 22);
  std::uint64_t last = 0;
  for (const RunResult& r : rows) {
    CHECK(r.seed >= last);
    CHECK(r.seed != 4);
    last = r.seed;
  }
}

TEST_CASE("empty seed list gives an empty table") {
  CompareOptions opts;
  CHECK(compare_jobs(opts).empty());
  CHECK(sweep_rows(compare_jobs(opts), 2).empty());
}

TEST_CASE("grid sizes") {
  FloatsOptions floats;
  floats.seeds = {0, 1};
  CHECK(floats_jobs(floats).size() == 98 * 2);
  RedundancyOptions redundancy;
  redundancy.seeds = {0};
  CHECK(redundancy_jobs(redundancy).size() == 45);
  redundancy.tasks = {"bogus"};
  CHECK_THROWS_AS(redundancy_jobs(redundancy), std::invalid_argument);
}

TEST_CASE("compare emits 13 columns per model per seed, independent of worker count") {
  CompareOptions opts;
  opts.epochs = 20;
  opts.seeds = parse_seed_list("0..2");
  const auto one = sweep_rows(compare_jobs(opts), 1);
  CHECK(one.size() == 3 * 13 * 2);
  const auto many = sweep_rows(compare_jobs(opts), 3);
  REQUIRE(many.size() == one.size());
  for (std::size_t i = 0; i < one.size(); ++i) CHECK(to_csv_row(one[i]) == to_csv_row(many[i]));

  ResultFilter f;
  f.model = "mlp";
  f.task = "comparison_train";
  CHECK(mean_value(one, f).has_value());
  f.model = "nobody";
  CHECK_FALSE(mean_value(one, f).has_value());
}

TEST_CASE("recurrent and piecewise row layout") {
  RecurrentOptions rec;
  rec.lengths = {5, 20};
  rec.magnitudes = {2};
  rec.epochs = 5;
  rec.train_lists = 20;
  rec.test_lists = 5;
  rec.seeds = {0};
  const auto rows = sweep_rows(recurrent_jobs(rec), 1);
  // (base range + one magnitude) x two lengths x two models.
  CHECK(rows.size() == 8);
  CHECK(rows.front().task == "sequence");

  PiecewiseOptions pw;
  pw.epochs = 5;
  pw.min_exp = 2;
  pw.max_exp = 4;
  pw.seeds = {0};
  const auto prow = sweep_rows(piecewise_jobs(pw), 1);
  CHECK(prow.size() == (1 + 3) * 2);
  CHECK(prow[1].magnitude_base == 3);
}

TEST_CASE("snapshots round trip exactly") {
  RngStream rng(21);
  const NSRParams nsr = init_params(3, 4, 0.25, rng);
  std::stringstream buf;
  to_snapshot(nsr).write(buf);
  const NSRParams back = nsr_from_snapshot(Snapshot::read(buf));
  CHECK(back.lambda == 0.25);
  CHECK(back.v1.value == nsr.v1.value);
  CHECK(back.v2.value == nsr.v2.value);
  CHECK(back.w_plus.value == nsr.w_plus.value);
  CHECK(back.w_zero.value == nsr.w_zero.value);
  CHECK(back.bias.value == nsr.bias.value);

  const MLPParams mlp = init_mlp(2, rng, MlpOutput::kLinear);
  const auto path = std::filesystem::temp_directory_path() / "nsrlab_unit_snapshot.txt";
  save_snapshot(path.string(), to_snapshot(mlp));
  const MLPParams mback = mlp_from_snapshot(load_snapshot(path.string()));
  std::filesystem::remove(path);
  CHECK(mback.output == MlpOutput::kLinear);
  CHECK(mback.w_in.value == mlp.w_in.value);
  CHECK(mback.b_out.value == mlp.b_out.value);
}

TEST_CASE("malformed snapshots are rejected") {
  std::istringstream truncated("lambda 1 1 1\nv1 2 2 0.5 0.5\n");
  CHECK_THROWS_AS(Snapshot::read(truncated), std::runtime_error);
  std::istringstream missing("# only a comment\nlambda 1 1 1\n");
  CHECK_THROWS(nsr_from_snapshot(Snapshot::read(missing)));
  CHECK_THROWS(load_snapshot("/nonexistent/nsrlab/snapshot.txt"));
}
