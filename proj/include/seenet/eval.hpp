#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "seenet/image.hpp"
#include "seenet/masks.hpp"

namespace seenet {

inline constexpr std::uint8_t kDefaultIgnoreLabel = 255;

// (M+1) x (M+1) pixel counts, rows = ground truth, columns = prediction.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes);

  std::size_t num_classes() const { return num_classes_; }
  std::size_t labels() const { return num_classes_ + 1; }
  std::uint64_t at(std::size_t gt, std::size_t pred) const { return counts_[gt * labels() + pred]; }
  std::uint64_t& at(std::size_t gt, std::size_t pred) { return counts_[gt * labels() + pred]; }
  std::uint64_t total() const;

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t num_classes_;
  std::vector<std::uint64_t> counts_;
};

void confusion_accumulate(const LabelMap& pred, const LabelMap& gt, ConfusionMatrix& cm,
                          std::optional<std::uint8_t> ignore_label = kDefaultIgnoreLabel);

struct IouReport {
  // Per label 0..M; nullopt where the class is absent from both gt and prediction.
  std::vector<std::optional<double>> per_class;
  double mean = 0.0;
};

// Throws UndefinedMetric when no class has a non-zero denominator.
IouReport miou(const ConfusionMatrix& cm);

struct LocalizationScore {
  double precision = 0.0;
  double recall = 0.0;
  double iou = 0.0;
};

// Binarizes the attention at tau * max (value >= threshold and > 0) and
// scores it against a binary ground-truth mask (non-zero = object).
// An all-zero attention map predicts nothing: precision 0, recall 0.
LocalizationScore attention_localization_score(const AttentionMap& attention, const std::vector<std::uint8_t>& gt_mask,
                                               double tau);

// Share of above-threshold attention mass that lands on ground-truth
// background (gt_mask == 0). Zero when nothing is above threshold.
double background_leakage(const AttentionMap& attention, const std::vector<std::uint8_t>& gt_mask, double tau);

}  // namespace seenet
