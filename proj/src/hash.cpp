#include "ganbench/hash.hpp"

#include <cstdio>
#include <fstream>
#include <vector>

#include "ganbench/error.hpp"

namespace ganbench {

std::string Fnv1a::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(state_));
  return buf;
}

std::uint64_t hash_bytes(const void* data, std::size_t n) {
  Fnv1a h;
  h.update(data, n);
  return h.digest();
}

std::string hash_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open for hashing: ", path);
  Fnv1a h;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

}  // namespace ganbench
