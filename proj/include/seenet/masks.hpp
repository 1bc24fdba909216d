#pragma once

#include <cstddef>
#include <vector>

#include "seenet/tensor.hpp"

namespace seenet {

// Single-channel non-negative spatial map. When `normalized` is set the values
// lie in [0,1] and the maximum is exactly 1 unless the map is all zero.
struct AttentionMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> values;
  bool normalized = false;

  AttentionMap() = default;
  AttentionMap(std::size_t h, std::size_t w, float fill = 0.0f, bool is_normalized = false)
      : height(h), width(w), values(h * w, fill), normalized(is_normalized) {}
  AttentionMap(std::size_t h, std::size_t w, std::vector<float> v, bool is_normalized = false);

  std::size_t size() const { return values.size(); }
  float at(std::size_t y, std::size_t x) const { return values[y * width + x]; }
  float max() const;
  bool operator==(const AttentionMap&) const = default;
};

enum class Zone : signed char { background = -1, attention = 0, potential = 1 };

struct ZoneCounts {
  std::size_t attention = 0;
  std::size_t potential = 0;
  std::size_t background = 0;
};

// Per-pixel zone codes: 0 attention, -1 background, +1 potential.
class TernaryMask {
 public:
  TernaryMask() = default;
  TernaryMask(std::size_t h, std::size_t w, std::vector<signed char> codes);

  std::size_t height() const { return mask_.height; }
  std::size_t width() const { return mask_.width; }
  std::size_t size() const { return mask_.size(); }
  Zone zone(std::size_t i) const { return static_cast<Zone>(mask_.values[i]); }
  const std::vector<signed char>& codes() const { return mask_.values; }
  const MaskMap& as_mask() const { return mask_; }
  ZoneCounts counts() const;

  bool operator==(const TernaryMask&) const = default;

 private:
  MaskMap mask_;
};

inline constexpr double kDefaultHighFactor = 0.7;
inline constexpr double kDefaultLowFactor = 0.05;

// Divide by the maximum; an all-zero map stays all zero (flagged normalized).
AttentionMap normalize_map(const AttentionMap& map);

// 0 where value >= k_h*max, -1 where value < k_l*max, +1 otherwise.
// An all-zero map is entirely background.
TernaryMask ternary_mask(const AttentionMap& attention, double k_h = kDefaultHighFactor,
                         double k_l = kDefaultLowFactor);

// The second branch consumes the ternary mask verbatim.
MaskMap mask_for_sb(const TernaryMask& ternary);

// 1 where value < ((k_h+k_l)/2)*max (third branch's background zone), 0 elsewhere.
// An all-zero map is entirely background.
MaskMap mask_for_sc(const AttentionMap& attention, double k_h = kDefaultHighFactor, double k_l = kDefaultLowFactor);

AttentionMap fuse_attention(const AttentionMap& a_hat, const AttentionMap& b_hat);

// Merge a map with the (already flipped back) map of the mirrored input.
AttentionMap flip_fuse(const AttentionMap& fused, const AttentionMap& fused_mirrored);

AttentionMap flip_horizontal(const AttentionMap& map);

}  // namespace seenet
