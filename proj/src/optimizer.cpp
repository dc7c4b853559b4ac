#include "setnovo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace setnovo::nn {

void Adam::step(std::vector<Tensor*>& params,
                const std::vector<const Tensor*>& grads, double lr_scale) {
  if (params.size() != grads.size())
    throw std::invalid_argument("adam: params/grads size mismatch");
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Tensor* p : params) {
      m_.emplace_back(p->rows, p->cols);
      v_.emplace_back(p->rows, p->cols);
    }
  }
  if (m_.size() != params.size())
    throw std::invalid_argument("adam: parameter count changed");

  ++t_;
  double b1t = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double b2t = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  double lr = cfg_.lr * lr_scale;

  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = *params[i];
    const Tensor& g = *grads[i];
    if (!p.same_shape(g) || !p.same_shape(m_[i]))
      throw std::invalid_argument("adam: shape mismatch at parameter " +
                                  std::to_string(i));
    for (std::size_t k = 0; k < p.size(); ++k) {
      double gk = g.data[k];
      m_[i].data[k] = cfg_.beta1 * m_[i].data[k] + (1.0 - cfg_.beta1) * gk;
      v_[i].data[k] = cfg_.beta2 * v_[i].data[k] + (1.0 - cfg_.beta2) * gk * gk;
      double mhat = m_[i].data[k] / b1t;
      double vhat = v_[i].data[k] / b2t;
      p.data[k] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

double lr_multiplier(const std::vector<double>& val_losses) {
  constexpr std::size_t kWindow = 10;
  if (val_losses.size() < kWindow + 1) return 1.0;
  double recent_best = val_losses[val_losses.size() - kWindow];
  for (std::size_t i = val_losses.size() - kWindow; i < val_losses.size(); ++i)
    recent_best = std::min(recent_best, val_losses[i]);
  double prior_best = val_losses[0];
  for (std::size_t i = 0; i + kWindow < val_losses.size(); ++i)
    prior_best = std::min(prior_best, val_losses[i]);
  return recent_best > prior_best ? 0.5 : 1.0;
}

}  // namespace setnovo::nn
