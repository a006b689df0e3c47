#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ganbench/nn/layers.hpp"

namespace ganbench::nn {

template <typename T>
class Sequential {
 public:
  Sequential() = default;

  Layer<T>* add(std::unique_ptr<Layer<T>> layer) {
    layers_.push_back(std::move(layer));
    return layers_.back().get();
  }

  Tensor<T> forward(const Tensor<T>& x, bool training = false) {
    Tensor<T> cur = x;
    shapes_.clear();
    for (auto& l : layers_) {
      cur = l->forward(cur, training);
      shapes_.push_back(shape_of(cur));
    }
    return cur;
  }

  Tensor<T> backward(const Tensor<T>& dy) {
    Tensor<T> cur = dy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
      cur = (*it)->backward(cur);
    return cur;
  }

  std::vector<Param<T>*> params() {
    std::vector<Param<T>*> out;
    for (auto& l : layers_)
      for (auto* p : l->params()) out.push_back(p);
    return out;
  }

  void zero_grads() {
    for (auto* p : params()) p->grad.zero();
  }

  std::size_t num_layers() const { return layers_.size(); }
  Layer<T>* layer(std::size_t i) { return layers_[i].get(); }

  // Output shape of each layer during the most recent forward pass.
  const std::vector<Shape>& last_shapes() const { return shapes_; }

 private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
  std::vector<Shape> shapes_;
};

}  // namespace ganbench::nn
