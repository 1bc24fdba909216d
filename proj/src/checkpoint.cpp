#include "seenet/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "seenet/serialize.hpp"

namespace seenet {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'E', 'C', 'K'};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const SeeNet& model, std::size_t iteration,
                     std::uint64_t seed) {
  const nlohmann::json header{{"config", model.config()},
                              {"iteration", iteration},
                              {"seed", seed},
                              {"tensors", model.parameter_names()}};
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  write_u32_le(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& p : model.parameters()) write_tensor(out, p);
  if (!out) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw IoError("not a checkpoint (bad magic)");
    const std::uint32_t len = read_u32_le(in);
    std::string text(len, '\0');
    in.read(text.data(), len);
    if (!in) throw IoError("truncated header");
    const auto header = nlohmann::json::parse(text);
    const ModelConfig config = header.at("config").get<ModelConfig>();
    Checkpoint ck{SeeNet(config, 0), header.at("iteration").get<std::size_t>(), header.at("seed").get<std::uint64_t>()};
    const auto names = header.at("tensors").get<std::vector<std::string>>();
    if (names != ck.model.parameter_names()) throw IoError("parameter list does not match the architecture");
    for (auto p : ck.model.parameters()) {
      const Tensor t = read_tensor(in);
      if (t.shape() != p.shape()) {
        throw IoError("tensor shape " + shape_str(t.shape()) + " does not match expected " + shape_str(p.shape()));
      }
      std::copy(t.data().begin(), t.data().end(), p.mutable_data().begin());
    }
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": malformed checkpoint header: " + e.what());
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": invalid architecture: " + e.what());
  }
}

}  // namespace seenet
