#include "nsrlab/tasks.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>

namespace nsrlab {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

std::int64_t sample_magnitude(int base, int exponent, RngStream& rng) {
  if (base < 2 || exponent < 0) throw std::invalid_argument("sample_magnitude: bad base/exponent");
  const std::int64_t lo = ipow(base, exponent);
  return rng.uniform_int(lo, lo * base - 1);
}

Dataset comparison_train_set(ComparisonOp op, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("comparison_train_set: delta must be > 0");
  constexpr std::size_t kSide = kTrainHigh - kTrainLow + 1;
  Dataset out{Matrix(kSide * kSide, 2), {}};
  out.targets.reserve(kSide * kSide);
  std::size_t row = 0;
  for (int a = kTrainLow; a <= kTrainHigh; ++a) {
    for (int b = kTrainLow; b <= kTrainHigh; ++b) {
      out.inputs(row, 0) = a * delta;
      out.inputs(row, 1) = b * delta;
      out.targets.push_back(truth(op, a, b) ? 1.0 : 0.0);
      ++row;
    }
  }
  return out;
}

Dataset extrapolation_suite(ComparisonOp op, int magnitude_exp, int base, double delta,
                            RngStream& rng) {
  if (!(delta > 0.0)) throw std::invalid_argument("extrapolation_suite: delta must be > 0");
  const std::int64_t n = sample_magnitude(base, magnitude_exp, rng);
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (int i = -kNeighbourhood; i <= kNeighbourhood; ++i) pairs.emplace_back(n, n + i);
  if (is_equality(op)) {
    for (int i = -kNeighbourhood; i <= kNeighbourhood; ++i) {
      if (i != 0) pairs.emplace_back(n + i, n + i);
    }
  }
  Dataset out{Matrix(pairs.size(), 2), {}};
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    out.inputs(r, 0) = static_cast<double>(pairs[r].first) * delta;
    out.inputs(r, 1) = static_cast<double>(pairs[r].second) * delta;
    const bool label = truth(op, static_cast<double>(pairs[r].first),
                             static_cast<double>(pairs[r].second));
    out.targets.push_back(label ? 1.0 : 0.0);
  }
  return out;
}

std::string_view to_string(PiecewiseFn fn) { return fn == PiecewiseFn::kAbs ? "abs" : "f"; }

std::optional<PiecewiseFn> parse_piecewise_fn(std::string_view text) {
  if (text == "abs") return PiecewiseFn::kAbs;
  if (text == "f") return PiecewiseFn::kF;
  return std::nullopt;
}

std::size_t piecewise_arity(PiecewiseFn fn) { return fn == PiecewiseFn::kAbs ? 2 : 5; }

double piecewise_target(PiecewiseFn fn, std::span<const double> x) {
  if (x.size() != piecewise_arity(fn)) {
    throw std::invalid_argument("piecewise_target: wrong number of inputs");
  }
  if (fn == PiecewiseFn::kAbs) return x[0] > x[1] ? x[0] - x[1] : x[1] - x[0];
  return x[0] > x[1] ? x[4] + 4.0 : x[3] - x[2];
}

namespace {

constexpr int kFreeLow = -100;
constexpr int kFreeHigh = 100;

void fill_free_inputs(Matrix& inputs, std::size_t row, RngStream& rng) {
  for (std::size_t c = 2; c < inputs.cols(); ++c) {
    inputs(row, c) = static_cast<double>(rng.uniform_int(kFreeLow, kFreeHigh));
  }
}

void fill_targets(PiecewiseFn fn, Dataset& data) {
  data.targets.resize(data.inputs.rows());
  for (std::size_t r = 0; r < data.inputs.rows(); ++r) {
    data.targets[r] = piecewise_target(fn, data.inputs.row(r));
  }
}

}  // namespace

Dataset piecewise_set(PiecewiseFn fn, RngStream& rng) {
  constexpr std::size_t kSide = kTrainHigh - kTrainLow + 1;
  Dataset out{Matrix(kSide * kSide, piecewise_arity(fn)), {}};
  std::size_t row = 0;
  for (int a = kTrainLow; a <= kTrainHigh; ++a) {
    for (int b = kTrainLow; b <= kTrainHigh; ++b) {
      out.inputs(row, 0) = a;
      out.inputs(row, 1) = b;
      fill_free_inputs(out.inputs, row, rng);
      ++row;
    }
  }
  fill_targets(fn, out);
  return out;
}

Dataset piecewise_extrapolation(PiecewiseFn fn, int magnitude_exp, RngStream& rng) {
  const std::int64_t n = sample_magnitude(3, magnitude_exp, rng);
  constexpr std::size_t kCases = 2 * kNeighbourhood + 1;
  Dataset out{Matrix(kCases, piecewise_arity(fn)), {}};
  for (std::size_t r = 0; r < kCases; ++r) {
    const std::int64_t offset = static_cast<std::int64_t>(r) - kNeighbourhood;
    out.inputs(r, 0) = static_cast<double>(n);
    out.inputs(r, 1) = static_cast<double>(n + offset);
    fill_free_inputs(out.inputs, r, rng);
  }
  fill_targets(fn, out);
  return out;
}

std::string_view to_string(SequenceKind kind) {
  return kind == SequenceKind::kMin ? "min" : "count";
}

std::optional<SequenceKind> parse_sequence_kind(std::string_view text) {
  if (text == "min") return SequenceKind::kMin;
  if (text == "count") return SequenceKind::kCount;
  return std::nullopt;
}

double sequence_target(SequenceKind kind, std::span<const double> list) {
  if (list.empty()) throw std::invalid_argument("sequence_target: empty list");
  if (kind == SequenceKind::kMin) return *std::min_element(list.begin(), list.end());
  return static_cast<double>(std::count(list.begin() + 1, list.end(), list[0]));
}

Dataset sequence_set(SequenceKind kind, std::size_t num_lists, std::size_t length,
                     std::optional<int> magnitude_exp, RngStream& rng) {
  if (length < 2) throw std::invalid_argument("sequence_set: length must be >= 2");
  Dataset out{Matrix(num_lists, length), std::vector<double>(num_lists)};
  for (std::size_t r = 0; r < num_lists; ++r) {
    std::int64_t lo = kTrainLow;
    std::int64_t hi = kTrainHigh;
    if (magnitude_exp) {
      const std::int64_t n = sample_magnitude(3, *magnitude_exp, rng);
      lo = n - kNeighbourhood;
      hi = n + kNeighbourhood;
    }
    for (std::size_t c = 0; c < length; ++c) {
      out.inputs(r, c) = static_cast<double>(rng.uniform_int(lo, hi));
    }
    out.targets[r] = sequence_target(kind, out.inputs.row(r));
  }
  return out;
}

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kComparisonTrain: return "comparison_train";
    case TaskKind::kComparisonExtrapolation: return "comparison_extrapolation";
    case TaskKind::kPiecewiseTrain: return "piecewise_train";
    case TaskKind::kPiecewiseExtrapolation: return "piecewise_extrapolation";
    case TaskKind::kSequence: return "sequence";
  }
  return "?";
}

Dataset generate(const TaskSpec& spec) {
  const RngStream root(spec.seed);
  const std::uint64_t mag = spec.magnitude_exp ? static_cast<std::uint64_t>(*spec.magnitude_exp) : 0;
  switch (spec.kind) {
    case TaskKind::kComparisonTrain:
      return comparison_train_set(spec.op, spec.delta);
    case TaskKind::kComparisonExtrapolation: {
      RngStream rng = root.split("comparison-extrapolation").split(mag);
      return extrapolation_suite(spec.op, spec.magnitude_exp.value_or(2), spec.base, spec.delta,
                                 rng);
    }
    case TaskKind::kPiecewiseTrain: {
      RngStream rng = root.split("piecewise-train");
      return piecewise_set(spec.fn, rng);
    }
    case TaskKind::kPiecewiseExtrapolation: {
      RngStream rng = root.split("piecewise-extrapolation").split(mag);
      return piecewise_extrapolation(spec.fn, spec.magnitude_exp.value_or(2), rng);
    }
    case TaskKind::kSequence: {
      RngStream rng = root.split("sequence").split(spec.seq_len * 100 + mag);
      return sequence_set(spec.sequence, spec.num_lists, spec.seq_len, spec.magnitude_exp, rng);
    }
  }
  throw std::invalid_argument("generate: unknown task kind");
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  for (std::size_t c = 0; c < data.inputs.cols(); ++c) out << "x" << (c + 1) << ",";
  out << "target\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.inputs.cols(); ++c) out << format_double(data.inputs(r, c)) << ",";
    out << format_double(data.targets[r]) << "\n";
  }
}

}  // namespace nsrlab
