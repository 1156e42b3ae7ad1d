#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace nsrlab {

// Logistic function, evaluated so that neither branch overflows.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// In-place softmax with max subtraction.
inline void softmax_inplace(std::span<double> logits) {
  if (logits.empty()) return;
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& v : logits) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : logits) v /= total;
}

}  // namespace nsrlab
