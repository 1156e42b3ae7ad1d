#include "nsrlab/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nsrlab/tasks.hpp"

namespace nsrlab {

namespace {

template <typename T>
std::string optional_cell(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename T>
std::optional<T> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  std::istringstream in(cell);
  T v{};
  if (!(in >> v) || in.peek() != std::char_traits<char>::eof()) {
    throw std::runtime_error("results csv: bad cell '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string to_csv_row(const RunResult& r) {
  std::string row = r.task + "," + r.op + "," + r.model + "," + std::to_string(r.seed) + ",";
  row += optional_cell(r.magnitude_base) + "," + optional_cell(r.magnitude_exp) + ",";
  row += optional_cell(r.seq_len) + "," + optional_cell(r.delta) + ",";
  row += optional_cell(r.lambda) + "," + optional_cell(r.redundancy) + ",";
  row += r.metric + ",";
  if (std::isfinite(r.value)) row += format_double(r.value);
  return row;
}

RunResult parse_csv_row(const std::string& line) {
  const std::vector<std::string> c = split_cells(line);
  if (c.size() != 12) {
    throw std::runtime_error("results csv: expected 12 cells, got " + std::to_string(c.size()));
  }
  RunResult r;
  r.task = c[0];
  r.op = c[1];
  r.model = c[2];
  r.seed = parse_cell<std::uint64_t>(c[3]).value_or(0);
  r.magnitude_base = parse_cell<int>(c[4]);
  r.magnitude_exp = parse_cell<int>(c[5]);
  r.seq_len = parse_cell<std::size_t>(c[6]);
  r.delta = parse_cell<double>(c[7]);
  r.lambda = parse_cell<double>(c[8]);
  r.redundancy = parse_cell<std::size_t>(c[9]);
  r.metric = c[10];
  r.value = parse_cell<double>(c[11]).value_or(std::nan(""));
  return r;
}

std::vector<RunResult> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRunResultHeader) {
    throw std::runtime_error("results csv: missing or unexpected header");
  }
  std::vector<RunResult> out;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_csv_row(line));
  }
  return out;
}

ResultWriter::ResultWriter(std::ostream& out) : out_(&out) {
  *out_ << kRunResultHeader << '\n';
  out_->flush();
}

void ResultWriter::write(const std::vector<RunResult>& rows) {
  for (const RunResult& r : rows) *out_ << to_csv_row(r) << '\n';
  out_->flush();
  if (!*out_) throw std::runtime_error("results csv: write failed");
  rows_ += rows.size();
}

SweepSummary run_sweep(const std::vector<Job>& jobs, ResultWriter& writer, std::size_t workers) {
  SweepSummary summary;
  summary.jobs = jobs.size();
  if (jobs.empty()) return summary;
  workers = std::max<std::size_t>(1, std::min(workers, jobs.size()));

  struct Outcome {
    std::vector<RunResult> rows;
    std::optional<std::string> error;
  };
  std::mutex mutex;
  std::map<std::size_t, Outcome> finished;
  std::size_t next_to_write = 0;
  std::atomic<std::size_t> next_job{0};
  std::exception_ptr writer_error;

  const auto flush_ready = [&]() {
    // Caller holds the mutex.
    for (auto it = finished.find(next_to_write); it != finished.end();
         it = finished.find(next_to_write)) {
      if (it->second.error) {
        summary.failures.push_back(jobs[next_to_write].label + ": " + *it->second.error);
      } else if (!writer_error) {
        try {
          writer.write(it->second.rows);
          summary.rows += it->second.rows.size();
        } catch (...) {
          writer_error = std::current_exception();
        }
      }
      finished.erase(it);
      ++next_to_write;
    }
  };

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next_job.fetch_add(1);
      if (i >= jobs.size()) return;
      Outcome outcome;
      try {
        outcome.rows = jobs[i].run();
      } catch (const std::exception& e) {
        outcome.error = e.what();
      } catch (...) {
        outcome.error = "unknown error";
      }
      const std::lock_guard<std::mutex> lock(mutex);
      finished.emplace(i, std::move(outcome));
      flush_ready();
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (writer_error) std::rethrow_exception(writer_error);
  return summary;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  const auto parse_one = [&](const std::string& item) -> std::uint64_t {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad seed '" + item + "' in '" + text + "'");
    }
    return std::stoull(item);
  };
  std::vector<std::uint64_t> seeds;
  if (text.empty()) return seeds;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      seeds.push_back(parse_one(item));
      continue;
    }
    const std::uint64_t lo = parse_one(item.substr(0, dots));
    const std::uint64_t hi = parse_one(item.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("descending seed range '" + item + "'");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (!text.empty() && text.back() == ',') throw std::invalid_argument("trailing comma in '" + text + "'");
  return seeds;
}

std::size_t worker_count(std::size_t fallback) {
  if (const char* env = std::getenv("NSRLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, fallback);
}

}  // namespace nsrlab
