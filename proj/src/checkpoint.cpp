#include "ganbench/checkpoint.hpp"

#include <cstdint>
#include <fstream>

#include "ganbench/error.hpp"

namespace ganbench {

namespace {
constexpr char kMagic[8] = {'G', 'B', 'C', 'K', 'P', 'T', '1', '\n'};
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json header = ckpt.header;
  auto& dir = header["tensors"] = nlohmann::json::array();
  for (const auto& [name, t] : ckpt.tensors)
    dir.push_back({{"name", name}, {"shape", {t.n, t.c, t.h, t.w}}});
  const std::string hs = header.dump();

  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write checkpoint: ", path);
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t hlen = hs.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  for (const auto& [name, t] : ckpt.tensors)
    out.write(reinterpret_cast<const char*>(t.data()),
              static_cast<std::streamsize>(t.size() * sizeof(float)));
  require(out.good(), "short write on checkpoint: ", path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open checkpoint: ", path);
  char magic[8];
  in.read(magic, sizeof(magic));
  require(in.good() && std::equal(magic, magic + 8, kMagic),
          "not a checkpoint file: ", path);
  std::uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  require(in.good() && hlen < (1u << 26), "corrupt checkpoint header: ", path);
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  require(in.good(), "truncated checkpoint header: ", path);

  Checkpoint ckpt;
  ckpt.header = nlohmann::json::parse(hs);
  for (const auto& e : ckpt.header.at("tensors")) {
    const auto& s = e.at("shape");
    nn::Tensor<float> t(s.at(0).get<int>(), s.at(1).get<int>(),
                        s.at(2).get<int>(), s.at(3).get<int>());
    in.read(reinterpret_cast<char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(float)));
    require(in.good(), "truncated tensor data in checkpoint: ", path);
    ckpt.tensors.emplace_back(e.at("name").get<std::string>(), std::move(t));
  }
  return ckpt;
}

}  // namespace ganbench
