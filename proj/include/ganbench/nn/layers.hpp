#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "ganbench/nn/gemm.hpp"
#include "ganbench/nn/tensor.hpp"
#include "ganbench/rng.hpp"

namespace ganbench::nn {

template <typename T>
struct Param {
  Tensor<T> value;
  Tensor<T> grad;

  void init_shape(int n, int c, int h, int w) {
    value = Tensor<T>(n, c, h, w);
    grad = Tensor<T>(n, c, h, w);
  }
};

template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  // Stashes whatever backward() needs; one backward per forward.
  virtual Tensor<T> forward(const Tensor<T>& x, bool training) = 0;
  virtual Tensor<T> backward(const Tensor<T>& dy) = 0;
  virtual std::vector<Param<T>*> params() { return {}; }
  virtual std::string name() const = 0;
};

namespace detail {

template <typename T>
void im2col(const T* x, int c, int h, int w, int k, int s, int p, int oh,
            int ow, T* col) {
  for (int ci = 0; ci < c; ++ci) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* dst = col + (static_cast<std::size_t>(ci) * k * k + ky * k + kx) *
                           (static_cast<std::size_t>(oh) * ow);
        for (int y = 0; y < oh; ++y) {
          const int iy = y * s + ky - p;
          T* row = dst + static_cast<std::size_t>(y) * ow;
          if (iy < 0 || iy >= h) {
            std::fill(row, row + ow, T(0));
            continue;
          }
          const T* src = x + (static_cast<std::size_t>(ci) * h + iy) * w;
          for (int xo = 0; xo < ow; ++xo) {
            const int ix = xo * s + kx - p;
            row[xo] = (ix >= 0 && ix < w) ? src[ix] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const T* col, int c, int h, int w, int k, int s, int p, int oh,
                int ow, T* x) {
  for (int ci = 0; ci < c; ++ci) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* src = col + (static_cast<std::size_t>(ci) * k * k + ky * k +
                              kx) *
                                 (static_cast<std::size_t>(oh) * ow);
        for (int y = 0; y < oh; ++y) {
          const int iy = y * s + ky - p;
          if (iy < 0 || iy >= h) continue;
          T* dst = x + (static_cast<std::size_t>(ci) * h + iy) * w;
          const T* row = src + static_cast<std::size_t>(y) * ow;
          for (int xo = 0; xo < ow; ++xo) {
            const int ix = xo * s + kx - p;
            if (ix >= 0 && ix < w) dst[ix] += row[xo];
          }
        }
      }
    }
  }
}

template <typename T>
void he_normal(Tensor<T>& t, int fan_in, Rng& rng) {
  std::normal_distribution<double> d(0.0, std::sqrt(2.0 / fan_in));
  for (auto& v : t.v) v = static_cast<T>(d(rng));
}

}  // namespace detail

// 2-D convolution, square kernel, zero padding. pad = k/2 keeps the
// spatial size at stride 1 ("same" padding).
template <typename T>
class Conv2d final : public Layer<T> {
 public:
  Conv2d(int in_c, int out_c, int k, int stride, int pad, Rng& rng)
      : in_c_(in_c), out_c_(out_c), k_(k), stride_(stride), pad_(pad) {
    weight_.init_shape(out_c, in_c, k, k);
    bias_.init_shape(out_c, 1, 1, 1);
    detail::he_normal(weight_.value, in_c * k * k, rng);
  }

  static std::unique_ptr<Conv2d> same(int in_c, int out_c, int k, Rng& rng) {
    return std::make_unique<Conv2d>(in_c, out_c, k, 1, k / 2, rng);
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require(x.c == in_c_, "Conv2d: expected ", in_c_, " channels, got ", x.c);
    x_ = x;
    const int oh = (x.h + 2 * pad_ - k_) / stride_ + 1;
    const int ow = (x.w + 2 * pad_ - k_) / stride_ + 1;
    require(oh > 0 && ow > 0, "Conv2d: input too small");
    Tensor<T> y(x.n, out_c_, oh, ow);
    const int ckk = in_c_ * k_ * k_;
    col_.assign(static_cast<std::size_t>(ckk) * oh * ow, T(0));
    for (int i = 0; i < x.n; ++i) {
      detail::im2col(&x.at(i, 0, 0, 0), in_c_, x.h, x.w, k_, stride_, pad_, oh,
                     ow, col_.data());
      gemm<T>(false, false, out_c_, oh * ow, ckk, T(1), weight_.value.data(),
              ckk, col_.data(), oh * ow, T(0), &y.at(i, 0, 0, 0), oh * ow);
      for (int oc = 0; oc < out_c_; ++oc) {
        T* row = &y.at(i, oc, 0, 0);
        const T b = bias_.value.v[oc];
        for (int j = 0; j < oh * ow; ++j) row[j] += b;
      }
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) override {
    const int oh = dy.h, ow = dy.w;
    const int ckk = in_c_ * k_ * k_;
    Tensor<T> dx(x_.n, in_c_, x_.h, x_.w);
    std::vector<T> dcol(static_cast<std::size_t>(ckk) * oh * ow);
    for (int i = 0; i < x_.n; ++i) {
      detail::im2col(&x_.at(i, 0, 0, 0), in_c_, x_.h, x_.w, k_, stride_, pad_,
                     oh, ow, col_.data());
      // dW += dY * col^T, db += row sums, dX = col2im(W^T * dY)
      gemm<T>(false, true, out_c_, ckk, oh * ow, T(1), &dy.at(i, 0, 0, 0),
              oh * ow, col_.data(), oh * ow, T(1), weight_.grad.data(), ckk);
      for (int oc = 0; oc < out_c_; ++oc) {
        const T* row = &dy.at(i, oc, 0, 0);
        T s = 0;
        for (int j = 0; j < oh * ow; ++j) s += row[j];
        bias_.grad.v[oc] += s;
      }
      gemm<T>(true, false, ckk, oh * ow, out_c_, T(1), weight_.value.data(),
              ckk, &dy.at(i, 0, 0, 0), oh * ow, T(0), dcol.data(), oh * ow);
      detail::col2im_add(dcol.data(), in_c_, x_.h, x_.w, k_, stride_, pad_, oh,
                         ow, &dx.at(i, 0, 0, 0));
    }
    return dx;
  }

  std::vector<Param<T>*> params() override { return {&weight_, &bias_}; }
  std::string name() const override { return "conv2d"; }

 private:
  int in_c_, out_c_, k_, stride_, pad_;
  Param<T> weight_, bias_;
  Tensor<T> x_;
  std::vector<T> col_;
};

// Depthwise 3x3 convolution, stride 1, same padding.
template <typename T>
class DepthwiseConv2d final : public Layer<T> {
 public:
  DepthwiseConv2d(int channels, Rng& rng) : c_(channels) {
    weight_.init_shape(channels, 1, 3, 3);
    bias_.init_shape(channels, 1, 1, 1);
    detail::he_normal(weight_.value, 9, rng);
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require(x.c == c_, "DepthwiseConv2d: expected ", c_, " channels");
    x_ = x;
    Tensor<T> y(x.n, c_, x.h, x.w);
    for (int i = 0; i < x.n; ++i)
      for (int ci = 0; ci < c_; ++ci) {
        const T* w = &weight_.value.at(ci, 0, 0, 0);
        const T b = bias_.value.v[ci];
        T* yp = &y.at(i, ci, 0, 0);
        for (int j = 0; j < x.plane(); ++j) yp[j] = b;
        // One shifted row-slice accumulation per tap keeps the inner
        // loop branch free.
        for (int ky = 0; ky < 3; ++ky)
          for (int kx = 0; kx < 3; ++kx) {
            const T wv = w[ky * 3 + kx];
            const int dyv = ky - 1, dxv = kx - 1;
            const int y0 = std::max(0, -dyv), y1 = std::min(x.h, x.h - dyv);
            const int x0 = std::max(0, -dxv), x1 = std::min(x.w, x.w - dxv);
            for (int yy = y0; yy < y1; ++yy) {
              T* out = &y.at(i, ci, yy, x0);
              const T* in = &x.at(i, ci, yy + dyv, x0 + dxv);
              for (int xx = 0; xx < x1 - x0; ++xx) out[xx] += wv * in[xx];
            }
          }
      }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> dx(x_.n, c_, x_.h, x_.w);
    for (int i = 0; i < x_.n; ++i)
      for (int ci = 0; ci < c_; ++ci) {
        const T* w = &weight_.value.at(ci, 0, 0, 0);
        T* dw = &weight_.grad.at(ci, 0, 0, 0);
        const T* gp = &dy.at(i, ci, 0, 0);
        T db = 0;
        for (int j = 0; j < dy.plane(); ++j) db += gp[j];
        bias_.grad.v[ci] += db;
        for (int ky = 0; ky < 3; ++ky)
          for (int kx = 0; kx < 3; ++kx) {
            const T wv = w[ky * 3 + kx];
            const int dyv = ky - 1, dxv = kx - 1;
            const int y0 = std::max(0, -dyv), y1 = std::min(x_.h, x_.h - dyv);
            const int x0 = std::max(0, -dxv), x1 = std::min(x_.w, x_.w - dxv);
            T wacc = 0;
            for (int yy = y0; yy < y1; ++yy) {
              const T* g = &dy.at(i, ci, yy, x0);
              const T* in = &x_.at(i, ci, yy + dyv, x0 + dxv);
              T* dxp = &dx.at(i, ci, yy + dyv, x0 + dxv);
              for (int xx = 0; xx < x1 - x0; ++xx) {
                wacc += g[xx] * in[xx];
                dxp[xx] += wv * g[xx];
              }
            }
            dw[ky * 3 + kx] += wacc;
          }
      }
    return dx;
  }

  std::vector<Param<T>*> params() override { return {&weight_, &bias_}; }
  std::string name() const override { return "dwconv2d"; }

 private:
  int c_;
  Param<T> weight_, bias_;
  Tensor<T> x_;
};

template <typename T>
class Dense final : public Layer<T> {
 public:
  Dense(int in, int out, Rng& rng) : in_(in), out_(out) {
    weight_.init_shape(out, in, 1, 1);
    bias_.init_shape(out, 1, 1, 1);
    detail::he_normal(weight_.value, in, rng);
  }

  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require(x.per_sample() == in_, "Dense: expected ", in_, " inputs, got ",
            x.per_sample());
    x_ = x;
    Tensor<T> y(x.n, out_, 1, 1);
    gemm<T>(false, true, x.n, out_, in_, T(1), x.data(), in_,
            weight_.value.data(), in_, T(0), y.data(), out_);
    for (int i = 0; i < x.n; ++i)
      for (int o = 0; o < out_; ++o) y.v[i * out_ + o] += bias_.value.v[o];
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) override {
    gemm<T>(true, false, out_, in_, x_.n, T(1), dy.data(), out_, x_.data(),
            in_, T(1), weight_.grad.data(), in_);
    for (int i = 0; i < x_.n; ++i)
      for (int o = 0; o < out_; ++o) bias_.grad.v[o] += dy.v[i * out_ + o];
    Tensor<T> dx(x_.n, x_.c, x_.h, x_.w);
    gemm<T>(false, false, x_.n, in_, out_, T(1), dy.data(), out_,
            weight_.value.data(), in_, T(0), dx.data(), in_);
    return dx;
  }

  std::vector<Param<T>*> params() override { return {&weight_, &bias_}; }
  std::string name() const override { return "dense"; }

 private:
  int in_, out_;
  Param<T> weight_, bias_;
  Tensor<T> x_;
};

template <typename T>
class ReLU final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    x_ = x;
    Tensor<T> y = x;
    for (auto& v : y.v)
      if (v < T(0)) v = T(0);
    return y;
  }
  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> dx = dy;
    for (std::size_t i = 0; i < dx.size(); ++i)
      if (x_.v[i] <= T(0)) dx.v[i] = T(0);
    return dx;
  }
  std::string name() const override { return "relu"; }

 private:
  Tensor<T> x_;
};

template <typename T>
class Sigmoid final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    Tensor<T> y = x;
    for (auto& v : y.v) v = T(1) / (T(1) + std::exp(-v));
    y_ = y;
    return y;
  }
  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> dx = dy;
    for (std::size_t i = 0; i < dx.size(); ++i)
      dx.v[i] *= y_.v[i] * (T(1) - y_.v[i]);
    return dx;
  }
  std::string name() const override { return "sigmoid"; }

 private:
  Tensor<T> y_;
};

// 2x2 max pooling, stride 2. Requires even spatial dims. Ties keep the
// first maximum in scan order, which makes backward deterministic.
template <typename T>
class MaxPool2 final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    require(x.h % 2 == 0 && x.w % 2 == 0, "MaxPool2: odd spatial dims");
    in_shape_ = shape_of(x);
    Tensor<T> y(x.n, x.c, x.h / 2, x.w / 2);
    argmax_.assign(y.size(), 0);
    std::size_t oi = 0;
    for (int i = 0; i < x.n; ++i)
      for (int ci = 0; ci < x.c; ++ci)
        for (int yy = 0; yy < y.h; ++yy)
          for (int xx = 0; xx < y.w; ++xx, ++oi) {
            T best = x.at(i, ci, 2 * yy, 2 * xx);
            int besti = (2 * yy) * x.w + 2 * xx;
            for (int dy2 = 0; dy2 < 2; ++dy2)
              for (int dx2 = 0; dx2 < 2; ++dx2) {
                const T v = x.at(i, ci, 2 * yy + dy2, 2 * xx + dx2);
                if (v > best) {
                  best = v;
                  besti = (2 * yy + dy2) * x.w + (2 * xx + dx2);
                }
              }
            y.v[oi] = best;
            argmax_[oi] = besti;
          }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> dx(in_shape_.n, in_shape_.c, in_shape_.h, in_shape_.w);
    std::size_t oi = 0;
    const std::size_t plane = static_cast<std::size_t>(in_shape_.h) * in_shape_.w;
    for (int i = 0; i < dy.n; ++i)
      for (int ci = 0; ci < dy.c; ++ci) {
        T* base = dx.data() + (static_cast<std::size_t>(i) * dx.c + ci) * plane;
        for (int j = 0; j < dy.plane(); ++j, ++oi) base[argmax_[oi]] += dy.v[oi];
      }
    return dx;
  }
  std::string name() const override { return "maxpool2"; }

 private:
  Shape in_shape_;
  std::vector<int> argmax_;
};

// Nearest-neighbour 2x upsampling.
template <typename T>
class Upsample2 final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    in_shape_ = shape_of(x);
    Tensor<T> y(x.n, x.c, x.h * 2, x.w * 2);
    for (int i = 0; i < x.n; ++i)
      for (int ci = 0; ci < x.c; ++ci)
        for (int yy = 0; yy < x.h; ++yy)
          for (int xx = 0; xx < x.w; ++xx) {
            const T v = x.at(i, ci, yy, xx);
            y.at(i, ci, 2 * yy, 2 * xx) = v;
            y.at(i, ci, 2 * yy, 2 * xx + 1) = v;
            y.at(i, ci, 2 * yy + 1, 2 * xx) = v;
            y.at(i, ci, 2 * yy + 1, 2 * xx + 1) = v;
          }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> dx(in_shape_.n, in_shape_.c, in_shape_.h, in_shape_.w);
    for (int i = 0; i < dx.n; ++i)
      for (int ci = 0; ci < dx.c; ++ci)
        for (int yy = 0; yy < dx.h; ++yy)
          for (int xx = 0; xx < dx.w; ++xx)
            dx.at(i, ci, yy, xx) = dy.at(i, ci, 2 * yy, 2 * xx) +
                                   dy.at(i, ci, 2 * yy, 2 * xx + 1) +
                                   dy.at(i, ci, 2 * yy + 1, 2 * xx) +
                                   dy.at(i, ci, 2 * yy + 1, 2 * xx + 1);
    return dx;
  }
  std::string name() const override { return "upsample2"; }

 private:
  Shape in_shape_;
};

template <typename T>
class GlobalAvgPool final : public Layer<T> {
 public:
  Tensor<T> forward(const Tensor<T>& x, bool) override {
    in_shape_ = shape_of(x);
    Tensor<T> y(x.n, x.c, 1, 1);
    const T inv = T(1) / static_cast<T>(x.plane());
    for (int i = 0; i < x.n; ++i)
      for (int ci = 0; ci < x.c; ++ci) {
        const T* p = &x.at(i, ci, 0, 0);
        T s = 0;
        for (int j = 0; j < x.plane(); ++j) s += p[j];
        y.at(i, ci, 0, 0) = s * inv;
      }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& dy) override {
    Tensor<T> dx(in_shape_.n, in_shape_.c, in_shape_.h, in_shape_.w);
    const T inv = T(1) / static_cast<T>(in_shape_.h * in_shape_.w);
    for (int i = 0; i < dx.n; ++i)
      for (int ci = 0; ci < dx.c; ++ci) {
        const T g = dy.at(i, ci, 0, 0) * inv;
        T* p = &dx.at(i, ci, 0, 0);
        for (int j = 0; j < dx.plane(); ++j) p[j] = g;
      }
    return dx;
  }
  std::string name() const override { return "gap"; }

 private:
  Shape in_shape_;
};

// Inverted dropout; identity at evaluation time.
template <typename T>
class Dropout final : public Layer<T> {
 public:
  Dropout(double rate, Rng& rng) : rate_(rate), rng_(make_rng(rng(), 0)) {}

  Tensor<T> forward(const Tensor<T>& x, bool training) override {
    if (!training || rate_ <= 0.0) {
      active_ = false;
      return x;
    }
    active_ = true;
    mask_.assign(x.size(), T(0));
    std::bernoulli_distribution keep(1.0 - rate_);
    const T scale = static_cast<T>(1.0 / (1.0 - rate_));
    Tensor<T> y = x;
    for (std::size_t i = 0; i < y.size(); ++i) {
      mask_[i] = keep(rng_) ? scale : T(0);
      y.v[i] *= mask_[i];
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& dy) override {
    if (!active_) return dy;
    Tensor<T> dx = dy;
    for (std::size_t i = 0; i < dx.size(); ++i) dx.v[i] *= mask_[i];
    return dx;
  }
  std::string name() const override { return "dropout"; }

 private:
  double rate_;
  Rng rng_;
  bool active_ = false;
  std::vector<T> mask_;
};

}  // namespace ganbench::nn
