#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace ganbench {

// Streaming FNV-1a (64 bit). Non-cryptographic; used to fingerprint
// configs, manifests and checkpoint payloads for provenance records.
class Fnv1a {
 public:
  void update(const void* data, std::size_t n) {
    auto p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void update(const std::string& s) { update(s.data(), s.size()); }
  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint64_t hash_bytes(const void* data, std::size_t n);
std::string hash_file_hex(const std::string& path);

}  // namespace ganbench
