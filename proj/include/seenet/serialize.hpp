#pragma once

#include <filesystem>
#include <iosfwd>

#include "seenet/tensor.hpp"

namespace seenet {

// Binary tensor layout, all little-endian:
//   "SETN" | u8 rank | rank x u32 dims | f32 payload (row-major)
void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);

void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

void write_u32_le(std::ostream& out, std::uint32_t v);
std::uint32_t read_u32_le(std::istream& in);

}  // namespace seenet
