#pragma once

// Reference implementations written independently of the library code paths.
// They favour obviousness over speed.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "seenet/eval.hpp"
#include "seenet/image.hpp"
#include "seenet/masks.hpp"
#include "seenet/proxy_gt.hpp"
#include "seenet/rng.hpp"
#include "seenet/tensor.hpp"

namespace seenet::oracle {

// Direct 7-loop convolution in long double.
template <typename T>
std::vector<long double> conv2d(const BasicTensor<T>& x, const BasicTensor<T>& w, const BasicTensor<T>& b,
                                std::size_t stride, std::size_t pad, std::size_t& out_h, std::size_t& out_w) {
  const std::size_t cin = x.dim(0), h = x.dim(1), wd = x.dim(2);
  const std::size_t cout = w.dim(0), k = w.dim(2);
  out_h = (h + 2 * pad - k) / stride + 1;
  out_w = (wd + 2 * pad - k) / stride + 1;
  std::vector<long double> out(cout * out_h * out_w, 0.0L);
  for (std::size_t o = 0; o < cout; ++o) {
    for (std::size_t y = 0; y < out_h; ++y) {
      for (std::size_t xo = 0; xo < out_w; ++xo) {
        long double acc = b[o];
        for (std::size_t c = 0; c < cin; ++c) {
          for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
              const long long iy = static_cast<long long>(y * stride + ky) - static_cast<long long>(pad);
              const long long ix = static_cast<long long>(xo * stride + kx) - static_cast<long long>(pad);
              if (iy < 0 || ix < 0 || iy >= static_cast<long long>(h) || ix >= static_cast<long long>(wd)) continue;
              acc += static_cast<long double>(x[(c * h + iy) * wd + ix]) *
                     static_cast<long double>(w[((o * cin + c) * k + ky) * k + kx]);
            }
          }
        }
        out[(o * out_h + y) * out_w + xo] = acc;
      }
    }
  }
  return out;
}

// Harmonic score rearranged as (w+1)ad / (wd + a), in long double.
inline long double harmonic(long double a, long double d, long double w = 1.0L) {
  if (a == 0.0L || d == 0.0L) return 0.0L;
  return (w + 1.0L) * a * d / (w * d + a);
}

// Full enumeration of the score rows; candidates ordered background, then
// classes ascending. A later candidate wins over background on ties, and
// never over an earlier class with the same score.
inline LabelMap proxy_gt(const SaliencyMap& d, const std::map<std::size_t, AttentionMap>& maps,
                         const std::vector<std::size_t>& classes, long double w = 1.0L) {
  const std::set<std::size_t> ys(classes.begin(), classes.end());
  LabelMap out(d.height, d.width, 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::vector<std::pair<std::size_t, long double>> q;
    q.emplace_back(0, 1.0L - d.values[i]);
    for (std::size_t c : ys) q.emplace_back(c, harmonic(maps.at(c).values[i], d.values[i], w));
    long double best_class_score = -1.0L;
    std::size_t best_class = 0;
    for (std::size_t r = 1; r < q.size(); ++r) {
      if (q[r].second > best_class_score) {
        best_class_score = q[r].second;
        best_class = q[r].first;
      }
    }
    out.values[i] = static_cast<std::uint8_t>(q[0].second > best_class_score ? 0 : best_class);
  }
  return out;
}

// Nested loops over (gt label, predicted label) pairs, each scanning all pixels.
inline std::vector<std::vector<std::uint64_t>> confusion(const std::vector<const LabelMap*>& preds,
                                                          const std::vector<const LabelMap*>& gts,
                                                          std::size_t num_classes,
                                                          std::optional<std::uint8_t> ignore) {
  std::vector<std::vector<std::uint64_t>> cm(num_classes + 1, std::vector<std::uint64_t>(num_classes + 1, 0));
  for (std::size_t g = 0; g <= num_classes; ++g) {
    for (std::size_t p = 0; p <= num_classes; ++p) {
      for (std::size_t k = 0; k < preds.size(); ++k) {
        for (std::size_t i = 0; i < gts[k]->size(); ++i) {
          const auto gv = gts[k]->values[i];
          const auto pv = preds[k]->values[i];
          if (ignore && (gv == *ignore || pv == *ignore)) continue;
          if (gv == g && pv == p) ++cm[g][p];
        }
      }
    }
  }
  return cm;
}

struct OracleIou {
  std::vector<std::optional<double>> per_class;
  std::optional<double> mean;
};

// IoU from pixel sets: |gt=c and pred=c| / |gt=c or pred=c|. The mean is
// summed as an exact fraction and rounded once.
inline OracleIou miou(const std::vector<const LabelMap*>& preds, const std::vector<const LabelMap*>& gts,
                      std::size_t num_classes, std::optional<std::uint8_t> ignore) {
  OracleIou r;
  unsigned __int128 num = 0, den = 1;
  std::size_t n = 0;
  for (std::size_t c = 0; c <= num_classes; ++c) {
    std::set<std::pair<std::size_t, std::size_t>> in_gt, in_pred;
    for (std::size_t k = 0; k < preds.size(); ++k) {
      for (std::size_t i = 0; i < gts[k]->size(); ++i) {
        const auto gv = gts[k]->values[i];
        const auto pv = preds[k]->values[i];
        if (ignore && (gv == *ignore || pv == *ignore)) continue;
        if (gv == c) in_gt.insert({k, i});
        if (pv == c) in_pred.insert({k, i});
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> inter, uni;
    std::set_intersection(in_gt.begin(), in_gt.end(), in_pred.begin(), in_pred.end(), std::back_inserter(inter));
    std::set_union(in_gt.begin(), in_gt.end(), in_pred.begin(), in_pred.end(), std::back_inserter(uni));
    if (uni.empty()) {
      r.per_class.push_back(std::nullopt);
      continue;
    }
    r.per_class.push_back(static_cast<double>(inter.size()) / static_cast<double>(uni.size()));
    num = num * uni.size() + inter.size() * den;
    den *= uni.size();
    const unsigned __int128 g = std::gcd(num, den);
    num /= g;
    den /= g;
    ++n;
  }
  if (n > 0) {
    den *= n;
    const unsigned __int128 g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (num < (static_cast<unsigned __int128>(1) << 53) && den < (static_cast<unsigned __int128>(1) << 53)) {
      r.mean = static_cast<double>(num) / static_cast<double>(den);
    } else {
      r.mean = static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
    }
  }
  return r;
}

// Set arithmetic on index sets.
inline LocalizationScore localization(const AttentionMap& att, const std::vector<std::uint8_t>& gt, double tau) {
  float mx = 0.0f;
  for (float v : att.values) mx = std::max(mx, v);
  std::set<std::size_t> pred, truth;
  for (std::size_t i = 0; i < att.size(); ++i) {
    if (att.values[i] > 0.0f && static_cast<double>(att.values[i]) >= tau * static_cast<double>(mx)) pred.insert(i);
    if (gt[i] != 0) truth.insert(i);
  }
  std::vector<std::size_t> inter, uni;
  std::set_intersection(pred.begin(), pred.end(), truth.begin(), truth.end(), std::back_inserter(inter));
  std::set_union(pred.begin(), pred.end(), truth.begin(), truth.end(), std::back_inserter(uni));
  LocalizationScore s;
  s.precision = pred.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(pred.size());
  s.recall = static_cast<double>(inter.size()) / static_cast<double>(truth.size());
  s.iou = static_cast<double>(inter.size()) / static_cast<double>(uni.size());
  return s;
}

// Zone of one value relative to a maximum, evaluated in long double.
inline int zone_code(float v, float mx, double k_h, double k_l) {
  if (mx <= 0.0f) return -1;
  const long double x = v, m = mx;
  if (x >= static_cast<long double>(k_h) * m) return 0;
  if (x < static_cast<long double>(k_l) * m) return -1;
  return 1;
}

// ---- random inputs --------------------------------------------------------

inline AttentionMap random_map(Rng& rng, std::size_t h, std::size_t w, bool normalized = false) {
  AttentionMap m(h, w);
  for (auto& v : m.values) v = static_cast<float>(rng.uniform());
  if (rng.uniform() < 0.2) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (rng.uniform() < 0.3) m.values[i] = 0.0f;
    }
  }
  return normalized ? normalize_map(m) : m;
}

inline SaliencyMap random_saliency(Rng& rng, std::size_t h, std::size_t w) {
  SaliencyMap s{h, w, std::vector<float>(h * w)};
  for (auto& v : s.values) {
    const double u = rng.uniform();
    v = u < 0.1 ? 0.0f : u > 0.9 ? 1.0f : static_cast<float>(rng.uniform());
  }
  return s;
}

inline LabelMap random_labels(Rng& rng, std::size_t h, std::size_t w, std::size_t num_classes, double ignore_prob = 0.0) {
  LabelMap m(h, w, 0);
  for (auto& v : m.values) {
    v = rng.uniform() < ignore_prob ? kDefaultIgnoreLabel : static_cast<std::uint8_t>(rng.index(num_classes + 1));
  }
  return m;
}

}  // namespace seenet::oracle
