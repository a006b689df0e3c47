#pragma once

#include <cmath>
#include <vector>

#include "ganbench/nn/tensor.hpp"

namespace ganbench::nn {

// Mean squared error over every element; gradient w.r.t. pred.
// Accumulates in double regardless of T.
template <typename T>
double mse(const Tensor<T>& pred, const Tensor<T>& target) {
  require(pred.same_shape(target), "mse: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = static_cast<double>(pred.v[i]) - target.v[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pred.size());
}

template <typename T>
Tensor<T> mse_grad(const Tensor<T>& pred, const Tensor<T>& target) {
  require(pred.same_shape(target), "mse_grad: shape mismatch");
  Tensor<T> g = pred;
  const T scale = T(2) / static_cast<T>(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g.v[i] = scale * (pred.v[i] - target.v[i]);
  return g;
}

// Softmax cross entropy on (n, classes, 1, 1) logits, mean over the batch.
// Returns the loss; fills dlogits.
template <typename T>
double softmax_xent(const Tensor<T>& logits, const std::vector<int>& labels,
                    Tensor<T>* dlogits) {
  require(logits.h == 1 && logits.w == 1, "softmax_xent: expected flat logits");
  require(static_cast<std::size_t>(logits.n) == labels.size(),
          "softmax_xent: label count mismatch");
  const int k = logits.c;
  *dlogits = Tensor<T>(logits.n, k, 1, 1);
  double loss = 0.0;
  for (int i = 0; i < logits.n; ++i) {
    const T* row = &logits.v[static_cast<std::size_t>(i) * k];
    T mx = row[0];
    for (int j = 1; j < k; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    for (int j = 0; j < k; ++j) z += std::exp(static_cast<double>(row[j] - mx));
    const int y = labels[i];
    require(y >= 0 && y < k, "softmax_xent: label out of range");
    loss -= static_cast<double>(row[y] - mx) - std::log(z);
    for (int j = 0; j < k; ++j) {
      const double p = std::exp(static_cast<double>(row[j] - mx)) / z;
      dlogits->v[static_cast<std::size_t>(i) * k + j] =
          static_cast<T>((p - (j == y ? 1.0 : 0.0)) / logits.n);
    }
  }
  return loss / logits.n;
}

// Softmax probabilities for inference.
template <typename T>
std::vector<double> softmax_probs(const Tensor<T>& logits, int sample) {
  const int k = logits.c;
  const T* row = &logits.v[static_cast<std::size_t>(sample) * k];
  T mx = row[0];
  for (int j = 1; j < k; ++j) mx = std::max(mx, row[j]);
  double z = 0.0;
  std::vector<double> p(k);
  for (int j = 0; j < k; ++j) {
    p[j] = std::exp(static_cast<double>(row[j] - mx));
    z += p[j];
  }
  for (auto& v : p) v /= z;
  return p;
}

}  // namespace ganbench::nn
