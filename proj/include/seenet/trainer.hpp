#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "seenet/eval.hpp"
#include "seenet/model.hpp"
#include "seenet/synth.hpp"

namespace seenet {

struct TrainConfig {
  std::size_t iters = 3000;
  float lr = 0.001f;
  std::size_t lr_drop_at = 1800;
  float lr_drop_factor = 0.1f;
  std::size_t batch = 16;
  float weight_decay = 0.0002f;
  float momentum = 0.9f;
  // Iterations with erasing disabled (branch B unmasked, branch C blank).
  std::size_t warmup = 500;
  std::uint64_t seed = 1;
  bool flip_augment = true;
  // Attention-quality metrics every N iterations (0 = only at the end, if any samples).
  std::size_t metric_every = 0;
  std::size_t metric_samples = 0;
  // Where to dump the offending batch if the loss goes non-finite.
  std::optional<std::filesystem::path> diagnostic_dir;

  void validate() const;
};

void to_json(nlohmann::json& j, const TrainConfig& c);

struct IterationRecord {
  std::size_t iter = 0;
  float lr = 0.0f;
  bool warmup = false;
  double loss = 0.0;
  double loss_a = 0.0;
  double loss_b = 0.0;
  double loss_c = 0.0;
};

struct AttentionQuality {
  std::size_t samples = 0;
  double iou = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // Mean over samples whose attention map is not all zero; a map without
  // mass has no leakage ratio. Those samples still score IoU 0.
  double leakage = 0.0;
  std::size_t empty_maps = 0;
};

// Accumulates per-sample localization scores into an AttentionQuality.
class AttentionQualityMeter {
 public:
  explicit AttentionQualityMeter(double tau) : tau_(tau) {}

  struct Sample {
    LocalizationScore score;
    std::optional<double> leakage;  // empty when the map has no mass
  };
  // `fg` must contain at least one foreground pixel.
  Sample add(const AttentionMap& attention, const std::vector<std::uint8_t>& fg);
  AttentionQuality result() const;

 private:
  double tau_;
  AttentionQuality sums_;
};

struct TrainLog {
  std::vector<IterationRecord> iterations;
  std::vector<std::pair<std::size_t, AttentionQuality>> quality;
};

// Receives one JSON object per log line.
using LogSink = std::function<void(const nlohmann::json&)>;

// Dataset class ids (1..M) to model channel indices (0..M-1).
LabelSet channels_for(const std::vector<std::size_t>& classes, std::size_t num_classes);

float learning_rate_at(const TrainConfig& config, std::size_t iter);

TrainLog train(SeeNet& model, const Dataset& data, const TrainConfig& config, const LogSink& sink = {});

// Mean localization metrics of infer_attention against the object-union
// ground truth, binarized at tau * max. Samples without foreground are skipped.
AttentionQuality evaluate_attention(const SeeNet& model, std::span<const SampleRecord> samples,
                                    std::size_t input_side, double tau = 0.5);

nlohmann::json to_json(const IterationRecord& r);
nlohmann::json to_json(const AttentionQuality& q);

}  // namespace seenet
