#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "seenet/model.hpp"
#include "seenet/synth.hpp"
#include "seenet/trainer.hpp"

namespace seenet {

struct AblationConfig {
  SynthConfig train_data;
  SynthConfig eval_data;
  ModelConfig model;
  TrainConfig train;
  std::vector<Strategy> strategies{Strategy::acol, Strategy::seenet};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::size_t input_side = 64;
  double tau = 0.5;

  // Desk-scale setting used by the acceptance run.
  static AblationConfig desk();
};

struct AblationRun {
  Strategy strategy = Strategy::seenet;
  std::uint64_t seed = 0;
  AttentionQuality quality;
  double final_loss = 0.0;
  double seconds = 0.0;
};

struct StrategySummary {
  Strategy strategy = Strategy::seenet;
  double iou_mean = 0.0, iou_std = 0.0;
  double leakage_mean = 0.0, leakage_std = 0.0;
};

struct AblationResult {
  std::vector<AblationRun> runs;
  std::vector<StrategySummary> summaries;

  const StrategySummary& summary(Strategy s) const;
};

// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_std(const std::vector<double>& values);

// Trains one model per (strategy, seed) on the same generated training set
// and scores infer_attention on the held-out set.
AblationResult run_ablation(const AblationConfig& config, const LogSink& sink = {});

nlohmann::json to_json(const AblationResult& result);

}  // namespace seenet
