#pragma once

#include <cstdint>
#include <vector>

#include "setnovo/tensor.hpp"

namespace setnovo::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moment buffers align positionally with the
// parameter list handed to step(), which must be stable across calls.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  const AdamConfig& config() const { return cfg_; }
  std::uint64_t step_count() const { return t_; }

  // params[i] is updated in place using grads[i]; lr_scale multiplies the
  // base learning rate (the schedule's cumulative factor).
  void step(std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
            double lr_scale);

  // Moment buffers for checkpointing, aligned with the parameter order.
  std::vector<Tensor>& m() { return m_; }
  std::vector<Tensor>& v() { return v_; }
  const std::vector<Tensor>& m() const { return m_; }
  const std::vector<Tensor>& v() const { return v_; }
  void set_step_count(std::uint64_t t) { t_ = t; }

 private:
  AdamConfig cfg_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  std::uint64_t t_ = 0;
};

// Halves the learning rate when validation stops improving: returns 0.5 when
// the history has at least 11 entries and the best of the last 10 never beat
// the best of everything before them, else 1.0. Pure function of the history;
// the caller folds successive factors into its running scale.
double lr_multiplier(const std::vector<double>& val_losses);

}  // namespace setnovo::nn
