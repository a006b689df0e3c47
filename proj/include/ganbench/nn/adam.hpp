#pragma once

#include <cmath>
#include <vector>

#include "ganbench/nn/layers.hpp"

namespace ganbench::nn {

// Adam with bias correction (Kingma & Ba defaults for the moment decays).
template <typename T>
class Adam {
 public:
  explicit Adam(std::vector<Param<T>*> params, double lr = 1e-3,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2),
        eps_(eps) {
    for (auto* p : params_) {
      m_.emplace_back(p->value.size(), T(0));
      v_.emplace_back(p->value.size(), T(0));
    }
  }

  void step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t pi = 0; pi < params_.size(); ++pi) {
      auto& val = params_[pi]->value.v;
      auto& grad = params_[pi]->grad.v;
      auto& m = m_[pi];
      auto& v = v_[pi];
      for (std::size_t i = 0; i < val.size(); ++i) {
        const double g = grad[i];
        m[i] = static_cast<T>(beta1_ * m[i] + (1.0 - beta1_) * g);
        v[i] = static_cast<T>(beta2_ * v[i] + (1.0 - beta2_) * g * g);
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        val[i] -= static_cast<T>(lr_ * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }

  void set_lr(double lr) { lr_ = lr; }

 private:
  std::vector<Param<T>*> params_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace ganbench::nn
