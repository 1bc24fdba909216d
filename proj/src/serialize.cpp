#include "seenet/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace seenet {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'E', 'T', 'N'};

void require(std::istream& in, const char* what) {
  if (!in) throw IoError(std::string("tensor stream truncated while reading ") + what);
}

}  // namespace

void write_u32_le(std::ostream& out, std::uint32_t v) {
  const std::array<unsigned char, 4> b{static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                       static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t read_u32_le(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  require(in, "u32");
  return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) | (std::uint32_t{b[3]} << 24);
}

void write_tensor(std::ostream& out, const Tensor& t) {
  if (t.rank() > std::numeric_limits<std::uint8_t>::max()) throw ContractViolation("tensor rank too large to serialize");
  out.write(kMagic.data(), kMagic.size());
  const auto rank = static_cast<unsigned char>(t.rank());
  out.put(static_cast<char>(rank));
  for (std::size_t d : t.shape()) {
    if (d > std::numeric_limits<std::uint32_t>::max()) throw ContractViolation("tensor dimension exceeds u32");
    write_u32_le(out, static_cast<std::uint32_t>(d));
  }
  for (float v : t.data()) write_u32_le(out, std::bit_cast<std::uint32_t>(v));
  if (!out) throw IoError("failed writing tensor");
}

Tensor read_tensor(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  require(in, "magic");
  if (magic != kMagic) throw IoError("bad tensor magic (expected SETN)");
  const int rank = in.get();
  require(in, "rank");
  Shape shape(static_cast<std::size_t>(rank));
  for (auto& d : shape) d = read_u32_le(in);
  std::vector<float> data(shape_numel(shape));
  for (auto& v : data) v = std::bit_cast<float>(read_u32_le(in));
  return Tensor(std::move(shape), std::move(data));
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_tensor(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace seenet
