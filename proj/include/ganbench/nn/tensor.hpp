#pragma once

#include <cstddef>
#include <vector>

#include "ganbench/error.hpp"

namespace ganbench::nn {

// Dense NCHW tensor. Dense layers treat it as (n, c*h*w) with h = w = 1
// on their outputs.
template <typename T>
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<T> v;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_),
        v(static_cast<std::size_t>(n_) * c_ * h_ * w_, T(0)) {}

  std::size_t size() const { return v.size(); }
  int plane() const { return h * w; }
  int per_sample() const { return c * h * w; }

  T* data() { return v.data(); }
  const T* data() const { return v.data(); }

  T& at(int i, int j, int y, int x) {
    return v[((static_cast<std::size_t>(i) * c + j) * h + y) * w + x];
  }
  const T& at(int i, int j, int y, int x) const {
    return v[((static_cast<std::size_t>(i) * c + j) * h + y) * w + x];
  }

  bool same_shape(const Tensor& o) const {
    return n == o.n && c == o.c && h == o.h && w == o.w;
  }
  void zero() { std::fill(v.begin(), v.end(), T(0)); }
};

struct Shape {
  int n = 0, c = 0, h = 0, w = 0;
  bool operator==(const Shape&) const = default;
};

template <typename T>
Shape shape_of(const Tensor<T>& t) {
  return {t.n, t.c, t.h, t.w};
}

}  // namespace ganbench::nn
