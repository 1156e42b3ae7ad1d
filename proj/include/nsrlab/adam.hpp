#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "nsrlab/tape.hpp"

namespace nsrlab::ad {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class NonFiniteGradient : public std::runtime_error {
 public:
  explicit NonFiniteGradient(const std::string& parameter)
      : std::runtime_error("non-finite gradient in parameter '" + parameter + "'"),
        parameter_(parameter) {}
  const std::string& parameter() const { return parameter_; }

 private:
  std::string parameter_;
};

// One bias-corrected Adam update of every parameter, then zeroes the grads.
// Throws NonFiniteGradient before touching any value if a grad is NaN/inf.
void adam_step(std::span<Parameter* const> params, const AdamConfig& config = {});

void zero_grads(std::span<Parameter* const> params);

}  // namespace nsrlab::ad
