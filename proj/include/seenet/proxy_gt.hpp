#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

#include "seenet/image.hpp"
#include "seenet/masks.hpp"

namespace seenet {

// Class-agnostic saliency with values in [0,1].
struct SaliencyMap {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> values;

  std::size_t size() const { return values.size(); }
  bool operator==(const SaliencyMap&) const = default;
};

// (w + 1) / (w / attention + 1 / saliency); zero when either input is zero.
double harmonic_mean(double attention, double saliency, double w = 1.0);

struct ProxyScores {
  std::vector<std::size_t> rows;  // row labels: 0 (background) then the image classes
  std::vector<float> q;           // rows.size() x (H*W), row-major
};

// Per-pixel argmax over {background: 1 - D, class c: harm(A_c, D)} restricted
// to the image's classes. Ties go to a class over background and to the
// smallest class id among classes. `classes` holds ids in 1..255.
LabelMap generate_proxy_gt(const SaliencyMap& saliency, const std::map<std::size_t, AttentionMap>& attention,
                           const std::vector<std::size_t>& classes, double w = 1.0,
                           ProxyScores* scores = nullptr);

// PNG: single-channel u8 divided by 255. SETN tensor ([H,W] or [1,H,W]):
// divided by its maximum.
SaliencyMap load_saliency(const std::filesystem::path& path);
void save_saliency_png(const std::filesystem::path& path, const SaliencyMap& saliency);

}  // namespace seenet
