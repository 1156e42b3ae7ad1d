#include "nsrlab/adam.hpp"

#include <cmath>

namespace nsrlab::ad {

void adam_step(std::span<Parameter* const> params, const AdamConfig& config) {
  for (const Parameter* p : params) {
    for (double g : p->grad) {
      if (!std::isfinite(g)) throw NonFiniteGradient(p->name);
    }
  }
  for (Parameter* p : params) {
    ++p->step_count;
    const double t = static_cast<double>(p->step_count);
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      const double g = p->grad[k];
      p->adam_m[k] = config.beta1 * p->adam_m[k] + (1.0 - config.beta1) * g;
      p->adam_v[k] = config.beta2 * p->adam_v[k] + (1.0 - config.beta2) * g * g;
      const double m_hat = p->adam_m[k] / correction1;
      const double v_hat = p->adam_v[k] / correction2;
      p->value[k] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
    p->zero_grad();
  }
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace nsrlab::ad
