#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ganbench/nn/tensor.hpp"

namespace ganbench {

// Self-describing parameter container: a JSON header (model spec, seed,
// epoch, data fingerprint, tensor directory) followed by raw float32 blobs.
struct Checkpoint {
  nlohmann::json header;
  std::vector<std::pair<std::string, nn::Tensor<float>>> tensors;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ganbench
