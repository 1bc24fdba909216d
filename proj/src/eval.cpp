#include "seenet/eval.hpp"

#include <string>

namespace seenet {
namespace {

void check_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("tau must lie in (0,1), got " + std::to_string(tau));
}

std::vector<bool> binarize(const AttentionMap& attention, double tau) {
  const double threshold = tau * attention.max();
  std::vector<bool> on(attention.size());
  for (std::size_t i = 0; i < on.size(); ++i) {
    const double v = attention.values[i];
    on[i] = v > 0.0 && v >= threshold;
  }
  return on;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : num_classes_(num_classes), counts_((num_classes + 1) * (num_classes + 1), 0) {}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.num_classes_ != num_classes_) throw ContractViolation("cannot merge confusion matrices of different sizes");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

void confusion_accumulate(const LabelMap& pred, const LabelMap& gt, ConfusionMatrix& cm,
                          std::optional<std::uint8_t> ignore_label) {
  if (pred.height != gt.height || pred.width != gt.width) {
    throw ContractViolation("confusion_accumulate: prediction " + std::to_string(pred.height) + "x" +
                            std::to_string(pred.width) + " vs ground truth " + std::to_string(gt.height) + "x" +
                            std::to_string(gt.width));
  }
  // Validate first so a bad map leaves the matrix untouched.
  const std::size_t labels = cm.labels();
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto g = gt.values[i];
    const auto p = pred.values[i];
    if (ignore_label && (g == *ignore_label || p == *ignore_label)) continue;
    if (g >= labels || p >= labels) {
      throw ContractViolation("confusion_accumulate: label out of range at pixel " + std::to_string(i) + " (gt=" +
                              std::to_string(g) + ", pred=" + std::to_string(p) + ", classes=" +
                              std::to_string(cm.num_classes()) + ")");
    }
  }
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const auto g = gt.values[i];
    const auto p = pred.values[i];
    if (ignore_label && (g == *ignore_label || p == *ignore_label)) continue;
    ++cm.at(g, p);
  }
}

IouReport miou(const ConfusionMatrix& cm) {
  const std::size_t n = cm.labels();
  IouReport report;
  report.per_class.resize(n);
  long double acc = 0.0L;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::uint64_t row = 0, col = 0;
    for (std::size_t k = 0; k < n; ++k) {
      row += cm.at(c, k);
      col += cm.at(k, c);
    }
    const std::uint64_t hit = cm.at(c, c);
    const std::uint64_t denom = row + col - hit;
    if (denom == 0) continue;
    const double iou = static_cast<double>(hit) / static_cast<double>(denom);
    report.per_class[c] = iou;
    acc += static_cast<long double>(hit) / static_cast<long double>(denom);
    ++counted;
  }
  if (counted == 0) throw UndefinedMetric("mIoU undefined: confusion matrix is empty");
  report.mean = static_cast<double>(acc / static_cast<long double>(counted));
  return report;
}

LocalizationScore attention_localization_score(const AttentionMap& attention, const std::vector<std::uint8_t>& gt_mask,
                                               double tau) {
  check_tau(tau);
  if (gt_mask.size() != attention.size()) {
    throw ContractViolation("attention_localization_score: attention has " + std::to_string(attention.size()) +
                            " pixels, mask has " + std::to_string(gt_mask.size()));
  }
  const auto on = binarize(attention, tau);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < on.size(); ++i) {
    const bool truth = gt_mask[i] != 0;
    if (on[i] && truth) ++tp;
    if (on[i] && !truth) ++fp;
    if (!on[i] && truth) ++fn;
  }
  if (tp + fn == 0) throw UndefinedMetric("attention_localization_score: ground-truth mask is empty");
  LocalizationScore s;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  s.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  s.iou = static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
  return s;
}

double background_leakage(const AttentionMap& attention, const std::vector<std::uint8_t>& gt_mask, double tau) {
  check_tau(tau);
  if (gt_mask.size() != attention.size()) throw ContractViolation("background_leakage: size mismatch");
  const auto on = binarize(attention, tau);
  double total = 0.0, leaked = 0.0;
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (!on[i]) continue;
    total += attention.values[i];
    if (gt_mask[i] == 0) leaked += attention.values[i];
  }
  return total > 0.0 ? leaked / total : 0.0;
}

}  // namespace seenet
