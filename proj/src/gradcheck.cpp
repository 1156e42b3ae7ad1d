#include "nsrlab/gradcheck.hpp"

#include "nsrlab/adam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nsrlab::ad {

double gradient_error(double analytic, double numeric) {
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  const double diff = std::fabs(analytic - numeric);
  if (scale < 1e-8) return diff;
  return diff / scale;
}

bool GradCheckReport::passed() const {
  return std::all_of(entries.begin(), entries.end(),
                     [&](const GradCheckEntry& e) { return e.max_error < tolerance; });
}

double GradCheckReport::worst() const {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.max_error);
  return w;
}

std::string GradCheckReport::summary() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << e.parameter << "[" << e.worst_index << "]: error " << e.max_error << " (analytic "
        << e.analytic << ", numeric " << e.numeric << ")"
        << (e.max_error < tolerance ? "" : " FAIL") << "\n";
  }
  return out.str();
}

namespace {

double evaluate(const ScalarModel& model) {
  Tape tape;
  return model(tape).scalar();
}

}  // namespace

GradCheckReport finite_diff_check(std::span<Parameter* const> params, const ScalarModel& model,
                                  double h, double tol) {
  GradCheckReport report;
  report.tolerance = tol;

  zero_grads(params);
  {
    Tape tape;
    tape.backward(model(tape));
  }

  for (Parameter* p : params) {
    GradCheckEntry entry;
    entry.parameter = p->name;
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      const double saved = p->value[k];
      p->value[k] = saved + h;
      const double up = evaluate(model);
      p->value[k] = saved - h;
      const double down = evaluate(model);
      p->value[k] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double err = gradient_error(p->grad[k], numeric);
      if (k == 0 || err > entry.max_error) {
        entry.max_error = err;
        entry.worst_index = k;
        entry.analytic = p->grad[k];
        entry.numeric = numeric;
      }
    }
    report.entries.push_back(entry);
  }
  zero_grads(params);
  return report;
}

}  // namespace nsrlab::ad
