#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nsrlab/tape.hpp"

namespace nsrlab::ad {

// Builds a scalar from the current parameter values on a fresh tape.
using ScalarModel = std::function<Var(Tape&)>;

struct GradCheckEntry {
  std::string parameter;
  std::size_t worst_index = 0;
  double max_error = 0.0;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double tolerance = 0.0;

  bool passed() const;
  double worst() const;
  std::string summary() const;
};

// Mixed error used by every gradient comparison in the project: relative
// |a-n| / max(|a|,|n|), falling back to absolute |a-n| when both magnitudes
// are below 1e-8.
double gradient_error(double analytic, double numeric);

// Compares reverse-mode gradients with central differences of step h.
// Never throws on mismatch; the report says which entries failed.
GradCheckReport finite_diff_check(std::span<Parameter* const> params, const ScalarModel& model,
                                  double h = 1e-5, double tol = 1e-5);

}  // namespace nsrlab::ad
