#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "seenet/masks.hpp"
#include "seenet/tensor.hpp"

namespace seenet {

// Class-index map (ground truth or proxy labels); 0 = background.
struct LabelMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> values;

  LabelMap() = default;
  LabelMap(std::size_t h, std::size_t w, std::uint8_t fill = 0) : height(h), width(w), values(h * w, fill) {}

  std::size_t size() const { return values.size(); }
  bool operator==(const LabelMap&) const = default;
};

// Bilinear resampling with half-pixel centers (align_corners = false).
Tensor resize_bilinear(const Tensor& image, std::size_t out_h, std::size_t out_w);
AttentionMap resize_bilinear(const AttentionMap& map, std::size_t out_h, std::size_t out_w);

Tensor flip_horizontal(const Tensor& image);

// 8-bit PNG I/O. Gray images have one channel, RGB three; tensors hold [C,H,W]
// values in [0,1] (u8 / 255).
struct PngImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<std::uint8_t> pixels;  // interleaved HWC
};

PngImage read_png(const std::filesystem::path& path);
void write_png_gray(const std::filesystem::path& path, std::size_t h, std::size_t w,
                    const std::vector<std::uint8_t>& gray);
void write_png_rgb(const std::filesystem::path& path, const Tensor& image);
// Indexed-color PNG whose palette index equals the class id.
void write_png_indexed(const std::filesystem::path& path, const LabelMap& labels);

Tensor load_rgb_image(const std::filesystem::path& path);
LabelMap load_label_png(const std::filesystem::path& path);

// Exports round(255 * normalized value).
void write_attention_png(const std::filesystem::path& path, const AttentionMap& map);

std::uint8_t to_u8(float unit_value);

}  // namespace seenet
