#include "seenet/image.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

namespace seenet {
namespace {

struct SampleTap {
  std::size_t lo, hi;
  float frac;
};

std::vector<SampleTap> bilinear_taps(std::size_t in, std::size_t out) {
  std::vector<SampleTap> taps(out);
  const double ratio = static_cast<double>(in) / static_cast<double>(out);
  for (std::size_t o = 0; o < out; ++o) {
    double src = (static_cast<double>(o) + 0.5) * ratio - 0.5;
    src = std::clamp(src, 0.0, static_cast<double>(in - 1));
    const auto lo = static_cast<std::size_t>(std::floor(src));
    const std::size_t hi = std::min(lo + 1, in - 1);
    taps[o] = {lo, hi, static_cast<float>(src - static_cast<double>(lo))};
  }
  return taps;
}

void resize_plane(const float* src, std::size_t h, std::size_t w, float* dst, std::size_t oh, std::size_t ow) {
  const auto ty = bilinear_taps(h, oh);
  const auto tx = bilinear_taps(w, ow);
  for (std::size_t y = 0; y < oh; ++y) {
    const float* r0 = src + ty[y].lo * w;
    const float* r1 = src + ty[y].hi * w;
    for (std::size_t x = 0; x < ow; ++x) {
      const float top = r0[tx[x].lo] + (r0[tx[x].hi] - r0[tx[x].lo]) * tx[x].frac;
      const float bottom = r1[tx[x].lo] + (r1[tx[x].hi] - r1[tx[x].lo]) * tx[x].frac;
      dst[y * ow + x] = top + (bottom - top) * ty[y].frac;
    }
  }
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

void png_warn(png_structp, png_const_charp) {}

void write_png(const std::filesystem::path& path, std::size_t h, std::size_t w, int color_type,
               std::size_t channels, const std::uint8_t* pixels, const std::vector<png_color>* palette) {
  if (h == 0 || w == 0) throw ContractViolation("cannot write empty image " + path.string());
  FilePtr file = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path.string() + ": libpng failed while writing");
  }
  {
    png_init_io(png, file.get());
    png_set_compression_level(png, 6);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    if (palette) png_set_PLTE(png, info, palette->data(), static_cast<int>(palette->size()));
    png_write_info(png, info);
    for (std::size_t y = 0; y < h; ++y) {
      png_write_row(png, const_cast<png_bytep>(pixels + y * w * channels));
    }
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
}

// Class-id palette: 0 black, then distinct saturated colors; 255 white (ignore).
std::vector<png_color> label_palette() {
  std::vector<png_color> p(256);
  for (int i = 0; i < 256; ++i) {
    // VOC-style bit interleaving gives well-separated colors for small ids.
    int r = 0, g = 0, b = 0, id = i;
    for (int j = 0; j < 8; ++j) {
      r |= ((id >> 0) & 1) << (7 - j);
      g |= ((id >> 1) & 1) << (7 - j);
      b |= ((id >> 2) & 1) << (7 - j);
      id >>= 3;
    }
    p[static_cast<std::size_t>(i)] = {static_cast<png_byte>(r), static_cast<png_byte>(g), static_cast<png_byte>(b)};
  }
  p[255] = {255, 255, 255};
  return p;
}

}  // namespace

std::uint8_t to_u8(float unit_value) {
  const float clamped = std::clamp(unit_value, 0.0f, 1.0f);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0f));
}

Tensor resize_bilinear(const Tensor& image, std::size_t out_h, std::size_t out_w) {
  if (image.rank() != 3) throw ContractViolation("resize_bilinear: expected [C,H,W], got " + shape_str(image.shape()));
  const std::size_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
  if (h == 0 || w == 0 || out_h == 0 || out_w == 0) throw ContractViolation("resize_bilinear: zero-area image");
  if (h == out_h && w == out_w) return image.detach();
  std::vector<float> out(c * out_h * out_w);
  for (std::size_t ch = 0; ch < c; ++ch) {
    resize_plane(image.data().data() + ch * h * w, h, w, out.data() + ch * out_h * out_w, out_h, out_w);
  }
  return Tensor(Shape{c, out_h, out_w}, std::move(out));
}

AttentionMap resize_bilinear(const AttentionMap& map, std::size_t out_h, std::size_t out_w) {
  if (map.height == 0 || map.width == 0 || out_h == 0 || out_w == 0) {
    throw ContractViolation("resize_bilinear: zero-area map");
  }
  if (map.height == out_h && map.width == out_w) return map;
  AttentionMap out(out_h, out_w, 0.0f, false);
  resize_plane(map.values.data(), map.height, map.width, out.values.data(), out_h, out_w);
  return out;
}

Tensor flip_horizontal(const Tensor& image) {
  if (image.rank() != 3) throw ContractViolation("flip_horizontal: expected [C,H,W], got " + shape_str(image.shape()));
  const std::size_t c = image.dim(0), h = image.dim(1), w = image.dim(2);
  std::vector<float> out(image.numel());
  const auto in = image.data();
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < h; ++y) {
      const std::size_t row = (ch * h + y) * w;
      for (std::size_t x = 0; x < w; ++x) out[row + x] = in[row + w - 1 - x];
    }
  }
  return Tensor(image.shape(), std::move(out));
}

PngImage read_png(const std::filesystem::path& path) {
  FilePtr file = open_file(path, "rb");
  std::array<unsigned char, 8> sig{};
  if (std::fread(sig.data(), 1, sig.size(), file.get()) != sig.size() || png_sig_cmp(sig.data(), 0, sig.size()) != 0) {
    throw IoError(path.string() + ": not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, png_warn);
  png_infop info = png_create_info_struct(png);
  PngImage img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + ": corrupt or unsupported PNG");
  }
  {
    png_init_io(png, file.get());
    png_set_sig_bytes(png, static_cast<int>(sig.size()));
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (depth < 8) {
      if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_packing(png);
      } else {
        png_set_expand_gray_1_2_4_to_8(png);
      }
    }
    png_read_update_info(png, info);
    img.width = png_get_image_width(png, info);
    img.height = png_get_image_height(png, info);
    img.channels = png_get_channels(png, info);
    img.pixels.resize(img.width * img.height * img.channels);
    rows.resize(img.height);
    for (std::size_t y = 0; y < img.height; ++y) rows[y] = img.pixels.data() + y * img.width * img.channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png_gray(const std::filesystem::path& path, std::size_t h, std::size_t w,
                    const std::vector<std::uint8_t>& gray) {
  if (gray.size() != h * w) throw ContractViolation("write_png_gray: pixel count mismatch");
  write_png(path, h, w, PNG_COLOR_TYPE_GRAY, 1, gray.data(), nullptr);
}

void write_png_rgb(const std::filesystem::path& path, const Tensor& image) {
  if (image.rank() != 3 || image.dim(0) != 3) {
    throw ContractViolation("write_png_rgb: expected [3,H,W], got " + shape_str(image.shape()));
  }
  const std::size_t h = image.dim(1), w = image.dim(2), plane = h * w;
  std::vector<std::uint8_t> px(plane * 3);
  const auto d = image.data();
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) px[i * 3 + c] = to_u8(d[c * plane + i]);
  }
  write_png(path, h, w, PNG_COLOR_TYPE_RGB, 3, px.data(), nullptr);
}

void write_png_indexed(const std::filesystem::path& path, const LabelMap& labels) {
  const auto palette = label_palette();
  write_png(path, labels.height, labels.width, PNG_COLOR_TYPE_PALETTE, 1, labels.values.data(), &palette);
}

Tensor load_rgb_image(const std::filesystem::path& path) {
  const PngImage img = read_png(path);
  if (img.channels != 3) {
    throw IoError(path.string() + ": expected 3 channels (RGB), found " + std::to_string(img.channels));
  }
  const std::size_t plane = img.height * img.width;
  std::vector<float> data(3 * plane);
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) data[c * plane + i] = static_cast<float>(img.pixels[i * 3 + c]) / 255.0f;
  }
  return Tensor(Shape{3, img.height, img.width}, std::move(data));
}

LabelMap load_label_png(const std::filesystem::path& path) {
  PngImage img = read_png(path);
  if (img.channels != 1) {
    throw IoError(path.string() + ": expected a single-channel label image, found " + std::to_string(img.channels) +
                  " channels");
  }
  LabelMap out;
  out.height = img.height;
  out.width = img.width;
  out.values = std::move(img.pixels);
  return out;
}

void write_attention_png(const std::filesystem::path& path, const AttentionMap& map) {
  const AttentionMap unit = map.normalized ? map : normalize_map(map);
  std::vector<std::uint8_t> gray(unit.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = to_u8(unit.values[i]);
  write_png_gray(path, unit.height, unit.width, gray);
}

}  // namespace seenet
