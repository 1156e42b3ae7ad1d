#pragma once

// Dataset generators and exact ground-truth oracles.
//
// Every generator is a pure function of its arguments and the RngStream
// state it is given; generate(TaskSpec) wraps them so that a TaskSpec alone
// fixes the data bit for bit.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsrlab/comparison.hpp"
#include "nsrlab/matrix.hpp"
#include "nsrlab/rng.hpp"

namespace nsrlab {

struct Dataset {
  Matrix inputs;  // one example per row
  std::vector<double> targets;

  std::size_t size() const { return targets.size(); }
};

// Integers of the training range [-10, 9].
inline constexpr int kTrainLow = -10;
inline constexpr int kTrainHigh = 9;
// Half-width of the neighbourhood used by every extrapolation test.
inline constexpr int kNeighbourhood = 5;

// Uniform integer in [base^k, base^(k+1)).
std::int64_t sample_magnitude(int base, int exponent, RngStream& rng);

// All 400 pairs of [-10, 9]^2 scaled by delta; label = op on the integers.
Dataset comparison_train_set(ComparisonOp op, double delta);

// n drawn at base^k; cases (n, n+i) for i in [-5, 5], plus (n+i, n+i) for
// i != 0 when op is = or !=. Inputs are scaled by delta.
Dataset extrapolation_suite(ComparisonOp op, int magnitude_exp, int base, double delta,
                            RngStream& rng);

enum class PiecewiseFn { kAbs, kF };

std::string_view to_string(PiecewiseFn fn);
std::optional<PiecewiseFn> parse_piecewise_fn(std::string_view text);
std::size_t piecewise_arity(PiecewiseFn fn);

// abs(x1, x2) = x1 > x2 ? x1 - x2 : x2 - x1
// f(x1..x5)   = x1 > x2 ? x5 + 4  : x4 - x3
double piecewise_target(PiecewiseFn fn, std::span<const double> x);

// One row per pair of [-10, 9]^2; for f, x3..x5 uniform integers in [-100, 100].
Dataset piecewise_set(PiecewiseFn fn, RngStream& rng);
// Comparison inputs (n, n+i), i in [-5, 5], with n drawn at 3^k.
Dataset piecewise_extrapolation(PiecewiseFn fn, int magnitude_exp, RngStream& rng);

enum class SequenceKind { kMin, kCount };

std::string_view to_string(SequenceKind kind);
std::optional<SequenceKind> parse_sequence_kind(std::string_view text);

double sequence_target(SequenceKind kind, std::span<const double> list);

// Each row is one list. Without a magnitude, elements are uniform integers of
// [-10, 9]; with magnitude k, each list draws its own n at 3^k and its
// elements uniformly from [n-5, n+5].
Dataset sequence_set(SequenceKind kind, std::size_t num_lists, std::size_t length,
                     std::optional<int> magnitude_exp, RngStream& rng);

enum class TaskKind {
  kComparisonTrain,
  kComparisonExtrapolation,
  kPiecewiseTrain,
  kPiecewiseExtrapolation,
  kSequence,
};

std::string_view to_string(TaskKind kind);

struct TaskSpec {
  TaskKind kind = TaskKind::kComparisonTrain;
  ComparisonOp op = ComparisonOp::kGT;
  PiecewiseFn fn = PiecewiseFn::kAbs;
  SequenceKind sequence = SequenceKind::kMin;
  double delta = 1.0;
  int base = 10;
  std::optional<int> magnitude_exp;
  std::size_t seq_len = 5;
  std::size_t num_lists = 500;
  std::uint64_t seed = 0;
};

Dataset generate(const TaskSpec& spec);

// CSV with header x1..xn,target and shortest round-trip decimals.
void write_dataset_csv(std::ostream& out, const Dataset& data);

std::string format_double(double v);

}  // namespace nsrlab
