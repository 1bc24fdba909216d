#include "seenet/ablation.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "seenet/rng.hpp"

namespace seenet {

AblationConfig AblationConfig::desk() {
  AblationConfig c;
  c.train_data.n = 2000;
  c.train_data.num_classes = 6;
  c.train_data.image_side = 64;
  c.train_data.seed = 2024;
  c.eval_data = c.train_data;
  c.eval_data.n = 200;
  c.eval_data.image_side = 96;
  c.eval_data.seed = 4048;
  c.model.branch_channels = 32;
  c.train.iters = 3000;
  c.train.lr_drop_at = 1800;
  c.train.warmup = 500;
  c.train.batch = 8;
  c.train.lr = 0.01f;
  return c;
}

const StrategySummary& AblationResult::summary(Strategy s) const {
  for (const auto& x : summaries) {
    if (x.strategy == s) return x;
  }
  throw ContractViolation("ablation has no runs for strategy " + to_string(s));
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

AblationResult run_ablation(const AblationConfig& config, const LogSink& sink) {
  Dataset train_set{config.train_data.num_classes, generate_samples(config.train_data)};
  const std::vector<SampleRecord> eval_set = generate_samples(config.eval_data);
  if (config.eval_data.num_classes != config.train_data.num_classes) {
    throw ConfigError("ablation: train and eval class counts differ");
  }

  AblationResult result;
  for (Strategy strategy : config.strategies) {
    StrategySummary summary;
    summary.strategy = strategy;
    std::vector<double> ious, leaks;
    for (std::uint64_t seed : config.seeds) {
      ModelConfig mc = config.model;
      mc.num_classes = config.train_data.num_classes;
      mc.strategy = strategy;
      TrainConfig tc = config.train;
      tc.seed = seed;
      const auto t0 = std::chrono::steady_clock::now();
      SeeNet model(mc, derive_seed(seed, 0x30de1));
      const TrainLog log = train(model, train_set, tc);
      AblationRun run;
      run.strategy = strategy;
      run.seed = seed;
      run.quality = evaluate_attention(model, eval_set, config.input_side, config.tau);
      run.final_loss = log.iterations.empty() ? 0.0 : log.iterations.back().loss;
      run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ious.push_back(run.quality.iou);
      leaks.push_back(run.quality.leakage);
      if (sink) {
        nlohmann::json line = to_json(run.quality);
        line["event"] = "ablation_run";
        line["strategy"] = to_string(strategy);
        line["seed"] = seed;
        line["final_loss"] = run.final_loss;
        line["seconds"] = run.seconds;
        sink(line);
      }
      result.runs.push_back(run);
    }
    summary.iou_mean = std::accumulate(ious.begin(), ious.end(), 0.0) / static_cast<double>(ious.size());
    summary.leakage_mean = std::accumulate(leaks.begin(), leaks.end(), 0.0) / static_cast<double>(leaks.size());
    summary.iou_std = sample_std(ious);
    summary.leakage_std = sample_std(leaks);
    result.summaries.push_back(summary);
  }
  return result;
}

nlohmann::json to_json(const AblationResult& result) {
  nlohmann::json j;
  for (const auto& r : result.runs) {
    nlohmann::json line = to_json(r.quality);
    line["strategy"] = to_string(r.strategy);
    line["seed"] = r.seed;
    line["final_loss"] = r.final_loss;
    j["runs"].push_back(line);
  }
  for (const auto& s : result.summaries) {
    j["summaries"].push_back({{"strategy", to_string(s.strategy)},
                              {"iou_mean", s.iou_mean},
                              {"iou_std", s.iou_std},
                              {"leakage_mean", s.leakage_mean},
                              {"leakage_std", s.leakage_std}});
  }
  return j;
}

}  // namespace seenet
