#include "seenet/trainer.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "seenet/eval.hpp"
#include "seenet/image.hpp"
#include "seenet/inference.hpp"
#include "seenet/ops.hpp"
#include "seenet/optim.hpp"
#include "seenet/rng.hpp"

namespace seenet {
namespace {

class BatchSampler {
 public:
  BatchSampler(std::size_t n, std::uint64_t seed) : rng_(seed), order_(n) { reshuffle(); }

  std::size_t next() {
    if (cursor_ == order_.size()) reshuffle();
    return order_[cursor_++];
  }
  bool coin() { return rng_.uniform() < 0.5; }

 private:
  void reshuffle() {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    rng_.shuffle(order_);
    cursor_ = 0;
  }

  Rng rng_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

void dump_batch(const TrainConfig& config, std::size_t iter, const std::vector<std::size_t>& batch,
                const Dataset& data, const nlohmann::json& losses) {
  if (!config.diagnostic_dir) return;
  std::filesystem::create_directories(*config.diagnostic_dir);
  nlohmann::json dump{{"iter", iter}, {"losses", losses}};
  for (std::size_t idx : batch) {
    dump["samples"].push_back({{"id", data.samples[idx].id}, {"labels", data.samples[idx].classes}});
  }
  std::ofstream out(*config.diagnostic_dir / "nonfinite_batch.json");
  out << dump.dump(1) << "\n";
}

}  // namespace

void TrainConfig::validate() const {
  if (iters < 1) throw ConfigError("--iters must be >= 1");
  if (!(lr >= 0.0f) || !std::isfinite(lr)) throw ConfigError("--lr must be a finite non-negative number");
  if (!(lr_drop_factor > 0.0f && lr_drop_factor <= 1.0f)) throw ConfigError("lr drop factor must lie in (0, 1]");
  if (batch < 1) throw ConfigError("--batch must be >= 1");
  if (!(weight_decay >= 0.0f)) throw ConfigError("weight decay must be non-negative");
  if (!(momentum >= 0.0f && momentum < 1.0f)) throw ConfigError("--momentum must lie in [0, 1)");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = nlohmann::json{{"iters", c.iters},       {"lr", c.lr},
                     {"lr_drop_at", c.lr_drop_at}, {"lr_drop_factor", c.lr_drop_factor},
                     {"batch", c.batch},       {"weight_decay", c.weight_decay},
                     {"momentum", c.momentum}, {"warmup", c.warmup},
                     {"seed", c.seed},         {"flip_augment", c.flip_augment}};
}

LabelSet channels_for(const std::vector<std::size_t>& classes, std::size_t num_classes) {
  std::vector<std::size_t> channels;
  for (std::size_t c : classes) {
    if (c < 1 || c > num_classes) {
      throw ContractViolation("class id " + std::to_string(c) + " outside 1.." + std::to_string(num_classes));
    }
    channels.push_back(c - 1);
  }
  return make_label_set(std::move(channels), num_classes);
}

float learning_rate_at(const TrainConfig& config, std::size_t iter) {
  return iter >= config.lr_drop_at ? config.lr * config.lr_drop_factor : config.lr;
}

nlohmann::json to_json(const IterationRecord& r) {
  return {{"iter", r.iter}, {"lr", r.lr},         {"warmup", r.warmup}, {"loss", r.loss},
          {"loss_a", r.loss_a}, {"loss_b", r.loss_b}, {"loss_c", r.loss_c}};
}

nlohmann::json to_json(const AttentionQuality& q) {
  return {{"samples", q.samples}, {"attention_iou", q.iou}, {"precision", q.precision},
          {"recall", q.recall},   {"leakage", q.leakage},  {"empty_maps", q.empty_maps}};
}

TrainLog train(SeeNet& model, const Dataset& data, const TrainConfig& config, const LogSink& sink) {
  config.validate();
  if (data.samples.empty()) throw ContractViolation("train: dataset is empty");
  const std::size_t m = model.config().num_classes;
  if (data.num_classes != m) {
    throw ContractViolation("train: dataset has " + std::to_string(data.num_classes) + " classes, model has " +
                            std::to_string(m));
  }

  std::vector<LabelSet> labels;
  labels.reserve(data.samples.size());
  for (const auto& s : data.samples) labels.push_back(channels_for(s.classes, m));

  Sgd optimizer(model.parameters(), config.momentum, config.weight_decay);
  BatchSampler sampler(data.samples.size(), derive_seed(config.seed, 0x7a11));
  const float inv_batch = 1.0f / static_cast<float>(config.batch);

  std::vector<const SampleRecord*> probe;
  for (const auto& s : data.samples) {
    if (probe.size() >= config.metric_samples) break;
    if (s.gt.size() != 0) probe.push_back(&s);
  }
  auto measure = [&](std::size_t iter, TrainLog& log) {
    if (probe.empty()) return;
    std::vector<SampleRecord> subset;
    for (const auto* s : probe) subset.push_back(*s);
    const AttentionQuality q = evaluate_attention(model, subset, subset.front().image.dim(1));
    log.quality.emplace_back(iter, q);
    if (sink) {
      nlohmann::json line = to_json(q);
      line["event"] = "attention_quality";
      line["iter"] = iter;
      sink(line);
    }
  };

  TrainLog log;
  std::vector<std::size_t> batch(config.batch);
  for (std::size_t iter = 0; iter < config.iters; ++iter) {
    IterationRecord rec;
    rec.iter = iter;
    rec.lr = learning_rate_at(config, iter);
    rec.warmup = iter < config.warmup;
    ForwardOptions options;
    options.warmup = rec.warmup;

    for (auto& idx : batch) idx = sampler.next();
    optimizer.zero_grad();
    for (std::size_t idx : batch) {
      const SampleRecord& sample = data.samples[idx];
      const Tensor image = config.flip_augment && sampler.coin() ? flip_horizontal(sample.image) : sample.image;
      const auto out = model.forward(image, labels[idx], options);
      const auto losses = branch_losses(out, labels[idx]);
      rec.loss_a += losses.a.item() * inv_batch;
      rec.loss_b += losses.b.item() * inv_batch;
      rec.loss_c += losses.c.item() * inv_batch;
      rec.loss += losses.total.item() * inv_batch;
      if (!std::isfinite(losses.total.item())) {
        const nlohmann::json detail{{"sample", sample.id},
                                    {"loss_a", losses.a.item()},
                                    {"loss_b", losses.b.item()},
                                    {"loss_c", losses.c.item()}};
        dump_batch(config, iter, batch, data, detail);
        if (sink) sink({{"event", "nonfinite_loss"}, {"iter", iter}, {"detail", detail}});
        throw NumericError("non-finite loss at iteration " + std::to_string(iter) + " on sample " + sample.id);
      }
      scale(losses.total, inv_batch).backward();
    }
    optimizer.step(rec.lr);
    log.iterations.push_back(rec);
    if (sink) {
      nlohmann::json line = to_json(rec);
      line["event"] = "iteration";
      sink(line);
    }
    if (config.metric_every != 0 && (iter + 1) % config.metric_every == 0 && iter + 1 < config.iters) {
      measure(iter + 1, log);
    }
  }
  measure(config.iters, log);
  return log;
}

AttentionQualityMeter::Sample AttentionQualityMeter::add(const AttentionMap& attention,
                                                         const std::vector<std::uint8_t>& fg) {
  Sample out;
  out.score = attention_localization_score(attention, fg, tau_);
  sums_.iou += out.score.iou;
  sums_.precision += out.score.precision;
  sums_.recall += out.score.recall;
  if (attention.max() > 0.0f) {
    out.leakage = background_leakage(attention, fg, tau_);
    sums_.leakage += *out.leakage;
  } else {
    ++sums_.empty_maps;
  }
  ++sums_.samples;
  return out;
}

AttentionQuality AttentionQualityMeter::result() const {
  AttentionQuality q = sums_;
  if (q.samples > 0) {
    const double n = static_cast<double>(q.samples);
    q.iou /= n;
    q.precision /= n;
    q.recall /= n;
  }
  if (q.samples > q.empty_maps) q.leakage /= static_cast<double>(q.samples - q.empty_maps);
  return q;
}

AttentionQuality evaluate_attention(const SeeNet& model, std::span<const SampleRecord> samples,
                                    std::size_t input_side, double tau) {
  AttentionQualityMeter meter(tau);
  const std::size_t m = model.config().num_classes;
  for (const auto& s : samples) {
    std::vector<std::uint8_t> fg(s.gt.size());
    bool any = false;
    for (std::size_t i = 0; i < fg.size(); ++i) {
      fg[i] = s.gt.values[i] != 0 && s.gt.values[i] != kDefaultIgnoreLabel;
      any = any || fg[i];
    }
    if (!any) continue;
    meter.add(infer_attention(model, s.image, channels_for(s.classes, m), input_side), fg);
  }
  return meter.result();
}

}  // namespace seenet
