#include "seenet/masks.hpp"

#include <algorithm>
#include <string>

#include "seenet/decision_trace.hpp"

namespace seenet {
namespace {

void check_non_negative(const AttentionMap& map, const char* op) {
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    if (!(map.values[i] >= 0.0f)) {
      throw ContractViolation(std::string(op) + ": attention value " + std::to_string(map.values[i]) +
                              " at index " + std::to_string(i) + " is negative or NaN");
    }
  }
}

void check_factors(double k_h, double k_l) {
  if (!(k_l >= 0.0 && k_l < k_h && k_h <= 1.0)) {
    throw ConfigError("mask thresholds must satisfy 0 <= k_l < k_h <= 1 (got k_h=" + std::to_string(k_h) +
                      ", k_l=" + std::to_string(k_l) + ")");
  }
}

void check_same_shape(const AttentionMap& a, const AttentionMap& b, const char* op) {
  if (a.height != b.height || a.width != b.width) {
    throw ContractViolation(std::string(op) + ": shape " + std::to_string(a.height) + "x" + std::to_string(a.width) +
                            " vs " + std::to_string(b.height) + "x" + std::to_string(b.width));
  }
}

void check_normalized(const AttentionMap& m, const char* op) {
  if (!m.normalized) throw ContractViolation(std::string(op) + ": input map is not normalized");
}

AttentionMap pointwise_max(const AttentionMap& a, const AttentionMap& b) {
  AttentionMap out(a.height, a.width, 0.0f, true);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::max(a.values[i], b.values[i]);
  return out;
}

}  // namespace

AttentionMap::AttentionMap(std::size_t h, std::size_t w, std::vector<float> v, bool is_normalized)
    : height(h), width(w), values(std::move(v)), normalized(is_normalized) {
  if (values.size() != h * w) {
    throw ContractViolation("attention map data length " + std::to_string(values.size()) + " does not match " +
                            std::to_string(h) + "x" + std::to_string(w));
  }
}

float AttentionMap::max() const {
  float m = 0.0f;
  for (float v : values) m = std::max(m, v);
  return m;
}

TernaryMask::TernaryMask(std::size_t h, std::size_t w, std::vector<signed char> codes)
    : mask_(h, w, std::move(codes)) {}

ZoneCounts TernaryMask::counts() const {
  ZoneCounts c;
  for (signed char v : mask_.values) {
    switch (static_cast<Zone>(v)) {
      case Zone::attention: ++c.attention; break;
      case Zone::potential: ++c.potential; break;
      case Zone::background: ++c.background; break;
    }
  }
  return c;
}

AttentionMap normalize_map(const AttentionMap& map) {
  check_non_negative(map, "normalize_map");
  const float peak = map.max();
  AttentionMap out(map.height, map.width, map.values, true);
  if (peak > 0.0f) {
    for (float& v : out.values) v /= peak;
  }
  return out;
}

TernaryMask ternary_mask(const AttentionMap& attention, double k_h, double k_l) {
  check_factors(k_h, k_l);
  check_non_negative(attention, "ternary_mask");
  const double peak = attention.max();
  std::vector<signed char> codes(attention.size(), static_cast<signed char>(Zone::background));
  if (peak > 0.0) {
    const double high = k_h * peak;
    const double low = k_l * peak;
    for (std::size_t i = 0; i < codes.size(); ++i) {
      const double v = attention.values[i];
      Zone z = Zone::potential;
      if (v >= high) {
        z = Zone::attention;
      } else if (v < low) {
        z = Zone::background;
      }
      codes[i] = static_cast<signed char>(z);
      record_decision(static_cast<std::uint64_t>(codes[i] + 1));
    }
  }
  return TernaryMask(attention.height, attention.width, std::move(codes));
}

MaskMap mask_for_sb(const TernaryMask& ternary) { return ternary.as_mask(); }

MaskMap mask_for_sc(const AttentionMap& attention, double k_h, double k_l) {
  check_factors(k_h, k_l);
  check_non_negative(attention, "mask_for_sc");
  const double peak = attention.max();
  MaskMap out(attention.height, attention.width, static_cast<signed char>(1));
  if (peak > 0.0) {
    const double threshold = 0.5 * (k_h + k_l) * peak;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      const bool background = static_cast<double>(attention.values[i]) < threshold;
      out.values[i] = background ? 1 : 0;
      record_decision(background);
    }
  }
  return out;
}

AttentionMap fuse_attention(const AttentionMap& a_hat, const AttentionMap& b_hat) {
  check_same_shape(a_hat, b_hat, "fuse_attention");
  check_normalized(a_hat, "fuse_attention");
  check_normalized(b_hat, "fuse_attention");
  return pointwise_max(a_hat, b_hat);
}

AttentionMap flip_fuse(const AttentionMap& fused, const AttentionMap& fused_mirrored) {
  check_same_shape(fused, fused_mirrored, "flip_fuse");
  check_normalized(fused, "flip_fuse");
  check_normalized(fused_mirrored, "flip_fuse");
  return pointwise_max(fused, fused_mirrored);
}

AttentionMap flip_horizontal(const AttentionMap& map) {
  AttentionMap out = map;
  for (std::size_t y = 0; y < map.height; ++y) {
    for (std::size_t x = 0; x < map.width; ++x) {
      out.values[y * map.width + x] = map.values[y * map.width + (map.width - 1 - x)];
    }
  }
  return out;
}

}  // namespace seenet
