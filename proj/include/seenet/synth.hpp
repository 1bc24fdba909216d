#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seenet/image.hpp"
#include "seenet/proxy_gt.hpp"
#include "seenet/tensor.hpp"

namespace seenet {

struct SampleRecord {
  std::string id;
  std::uint64_t seed = 0;
  Tensor image;                     // [3,H,W], values are multiples of 1/255
  std::vector<std::size_t> classes; // sorted class ids in 1..M
  LabelMap gt;                      // evaluation only
  SaliencyMap saliency;
};

struct SynthConfig {
  std::size_t n = 1;
  std::size_t num_classes = 5;
  std::size_t image_side = 64;
  std::uint64_t seed = 0;
  double saliency_noise = 0.05;
  // Chance that an object gets a class-specific striped texture beside it.
  double distractor_prob = 0.8;
  double large_object_prob = 0.25;

  void validate() const;
};

std::string sample_id(std::size_t index);

// Sample `index` depends only on (config, index).
SampleRecord generate_sample(const SynthConfig& config, std::size_t index);
std::vector<SampleRecord> generate_samples(const SynthConfig& config);

// Union of object pixels, Gaussian-blurred (sigma defaults to side/64) and
// perturbed by seeded uniform noise in [-noise, noise], clamped to [0,1].
SaliencyMap synthetic_saliency(const SampleRecord& sample, double noise, std::optional<double> sigma = std::nullopt);

// Writes images/, gt/, saliency/ PNGs plus manifest.json and labels.json.
nlohmann::json gen_dataset(const SynthConfig& config, const std::filesystem::path& out_dir);

struct Dataset {
  std::size_t num_classes = 0;
  std::vector<SampleRecord> samples;
};

Dataset load_dataset(const std::filesystem::path& dir);

}  // namespace seenet
