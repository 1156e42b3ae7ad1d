#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "nsrlab/models.hpp"
#include "nsrlab/nsr.hpp"
#include "nsrlab/tasks.hpp"
#include "nsrlab/train.hpp"

using namespace nsrlab;

TEST_CASE("comparison training grid covers [-10, 9]^2") {
  const Dataset d = comparison_train_set(ComparisonOp::kGT, 1.0);
  CHECK(d.size() == 400);
  CHECK(d.inputs(0, 0) == -10.0);
  CHECK(d.inputs(399, 1) == 9.0);
  double positives = 0.0;
  for (double t : d.targets) positives += t;
  CHECK(positives == 190.0);
  const Dataset scaled = comparison_train_set(ComparisonOp::kEQ, 0.01);
  CHECK(scaled.inputs(0, 0) == doctest::Approx(-0.1));
  CHECK_THROWS_AS(comparison_train_set(ComparisonOp::kGT, 0.0), std::invalid_argument);
}

TEST_CASE("extrapolation suites sit at the requested magnitude") {
  for (int k = 2; k <= 13; ++k) {
    TaskSpec spec;
    spec.kind = TaskKind::kComparisonExtrapolation;
    spec.magnitude_exp = k;
    spec.seed = 4;
    const Dataset d = generate(spec);
    CHECK(d.size() == 11);
    const double n = d.inputs(0, 0);
    CHECK(n >= std::pow(10.0, k));
    CHECK(n < std::pow(10.0, k + 1));
    for (std::size_t r = 0; r < d.size(); ++r) {
      CHECK(std::fabs(d.inputs(r, 1) - n) <= 5.0);
      CHECK(d.targets[r] == (d.inputs(r, 0) > d.inputs(r, 1) ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("equality suites are rebalanced with equal pairs") {
  TaskSpec spec;
  spec.kind = TaskKind::kComparisonExtrapolation;
  spec.op = ComparisonOp::kEQ;
  spec.magnitude_exp = 6;
  const Dataset d = generate(spec);
  CHECK(d.size() == 21);
  double equal = 0.0;
  for (double t : d.targets) equal += t;
  CHECK(equal == 11.0);
}

TEST_CASE("a perfect oracle scores 1.0 on every comparison suite") {
  for (ComparisonOp op : kAllComparisonOps) {
    const NsrModel oracle(hand_weighted_nsr(op, 1.0, 20.0));
    TaskSpec spec;
    spec.op = op;
    CHECK(eval_classification(oracle, generate(spec)) == 1.0);
    spec.kind = TaskKind::kComparisonExtrapolation;
    for (int k = 2; k <= 13; ++k) {
      spec.magnitude_exp = k;
      CAPTURE(k);
      CHECK(eval_classification(oracle, generate(spec)) == 1.0);
    }
  }
}

TEST_CASE("piecewise targets") {
  CHECK(piecewise_target(PiecewiseFn::kAbs, std::vector<double>{3, 8}) == 5.0);
  CHECK(piecewise_target(PiecewiseFn::kAbs, std::vector<double>{-2, -9}) == 7.0);
  CHECK(piecewise_target(PiecewiseFn::kF, std::vector<double>{5, 1, 10, 3, 7}) == 11.0);
  CHECK(piecewise_target(PiecewiseFn::kF, std::vector<double>{1, 5, 10, 3, 7}) == -7.0);
  CHECK_THROWS_AS(piecewise_target(PiecewiseFn::kF, std::vector<double>{1, 2}),
                  std::invalid_argument);

  TaskSpec spec;
  spec.kind = TaskKind::kPiecewiseExtrapolation;
  spec.fn = PiecewiseFn::kF;
  spec.magnitude_exp = 6;
  const Dataset d = generate(spec);
  CHECK(d.inputs.cols() == 5);
  CHECK(d.inputs(0, 0) >= 729.0);
  CHECK(d.inputs(0, 0) < 2187.0);
}

TEST_CASE("sequence targets and lists") {
  CHECK(sequence_target(SequenceKind::kMin, std::vector<double>{4, -1, 7}) == -1.0);
  CHECK(sequence_target(SequenceKind::kCount, std::vector<double>{3, 3, 1, 3}) == 2.0);
  TaskSpec spec;
  spec.kind = TaskKind::kSequence;
  spec.num_lists = 20;
  spec.seq_len = 50;
  spec.magnitude_exp = 4;
  const Dataset d = generate(spec);
  CHECK(d.inputs.shape() == Shape{20, 50});
  for (std::size_t r = 0; r < d.size(); ++r) {
    const auto row = d.inputs.row(r);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    CHECK(*hi - *lo <= 10.0);
    CHECK(*lo >= 81.0 - 5.0);
  }
}

TEST_CASE("generation is deterministic per seed") {
  TaskSpec spec;
  spec.kind = TaskKind::kPiecewiseTrain;
  spec.fn = PiecewiseFn::kF;
  spec.seed = 12;
  CHECK(generate(spec).inputs == generate(spec).inputs);
  TaskSpec other = spec;
  other.seed = 13;
  CHECK(generate(spec).inputs != generate(other).inputs);
}

TEST_CASE("dataset csv export") {
  TaskSpec spec;
  spec.kind = TaskKind::kSequence;
  spec.sequence = SequenceKind::kCount;
  spec.num_lists = 3;
  spec.seq_len = 4;
  std::ostringstream out;
  write_dataset_csv(out, generate(spec));
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "x1,x2,x3,x4,target");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("name round trips") {
  for (ComparisonOp op : kAllComparisonOps) CHECK(parse_comparison_op(to_string(op)) == op);
  CHECK(parse_comparison_op(">=") == ComparisonOp::kGE);
  CHECK_FALSE(parse_comparison_op("bogus"));
  CHECK(parse_piecewise_fn("f") == PiecewiseFn::kF);
  CHECK(parse_sequence_kind("count") == SequenceKind::kCount);
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-3) == "0.001");
}
