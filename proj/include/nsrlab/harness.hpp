#pragma once

// Result rows, the CSV writer and the job pool shared by all experiments.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nsrlab {

struct RunResult {
  std::string task;
  std::string op;
  std::string model;
  std::uint64_t seed = 0;
  std::optional<int> magnitude_base;
  std::optional<int> magnitude_exp;
  std::optional<std::size_t> seq_len;
  std::optional<double> delta;
  std::optional<double> lambda;
  std::optional<std::size_t> redundancy;
  std::string metric = "accuracy";
  // NaN marks a failed run and is written as an empty cell.
  double value = 0.0;
};

inline constexpr const char* kRunResultHeader =
    "task,op,model,seed,magnitude_base,magnitude_exp,seq_len,delta,lambda,redundancy,metric,value";

std::string to_csv_row(const RunResult& r);
// Inverse of to_csv_row; throws std::runtime_error on a malformed row.
RunResult parse_csv_row(const std::string& line);
std::vector<RunResult> read_results_csv(std::istream& in);

// Writes the header on construction and flushes after every batch, so an
// interrupted sweep leaves a valid prefix.
class ResultWriter {
 public:
  explicit ResultWriter(std::ostream& out);
  void write(const std::vector<RunResult>& rows);
  std::size_t rows_written() const { return rows_; }

 private:
  std::ostream* out_;
  std::size_t rows_ = 0;
};

struct Job {
  std::string label;
  std::function<std::vector<RunResult>()> run;
};

struct SweepSummary {
  std::size_t jobs = 0;
  std::size_t rows = 0;
  std::vector<std::string> failures;  // "label: message"
};

// Runs every job on up to `workers` threads. Rows reach the writer in job
// order regardless of completion order. A job that throws is listed in the
// summary and contributes no rows; the others still run.
SweepSummary run_sweep(const std::vector<Job>& jobs, ResultWriter& writer, std::size_t workers);

// Comma-separated seeds or inclusive ranges, e.g. "0..9" or "1,4,10..12".
// Throws std::invalid_argument on bad syntax or a descending range.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// NSRLAB_WORKERS if set to a positive integer, else `fallback`.
std::size_t worker_count(std::size_t fallback);

}  // namespace nsrlab
