#include "seenet/proxy_gt.hpp"

#include <algorithm>
#include <string>

#include "seenet/serialize.hpp"

namespace seenet {

double harmonic_mean(double attention, double saliency, double w) {
  if (!(w > 0.0)) throw ConfigError("harmonic mean weight w must be positive, got " + std::to_string(w));
  if (attention <= 0.0 || saliency <= 0.0) return 0.0;
  return (w + 1.0) / (w / attention + 1.0 / saliency);
}

LabelMap generate_proxy_gt(const SaliencyMap& saliency, const std::map<std::size_t, AttentionMap>& attention,
                           const std::vector<std::size_t>& classes, double w, ProxyScores* scores) {
  if (!(w > 0.0)) throw ConfigError("harmonic mean weight w must be positive");
  if (classes.empty()) throw ContractViolation("generate_proxy_gt: image label set is empty");
  std::vector<std::size_t> ys = classes;
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  std::vector<const AttentionMap*> maps;
  for (std::size_t c : ys) {
    if (c == 0 || c > 255) throw ContractViolation("generate_proxy_gt: class id " + std::to_string(c) + " out of range");
    auto it = attention.find(c);
    if (it == attention.end()) {
      throw ContractViolation("generate_proxy_gt: no attention map for class " + std::to_string(c));
    }
    if (it->second.height != saliency.height || it->second.width != saliency.width) {
      throw ContractViolation("generate_proxy_gt: attention map for class " + std::to_string(c) + " is " +
                              std::to_string(it->second.height) + "x" + std::to_string(it->second.width) +
                              " but saliency is " + std::to_string(saliency.height) + "x" +
                              std::to_string(saliency.width));
    }
    maps.push_back(&it->second);
  }

  const std::size_t n = saliency.size();
  if (scores) {
    scores->rows.assign(1, 0);
    scores->rows.insert(scores->rows.end(), ys.begin(), ys.end());
    scores->q.assign(scores->rows.size() * n, 0.0f);
  }

  LabelMap out(saliency.height, saliency.width, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = saliency.values[i];
    const double background = 1.0 - d;
    double best = -1.0;
    std::size_t best_class = 0;
    for (std::size_t k = 0; k < ys.size(); ++k) {
      const double q = harmonic_mean(maps[k]->values[i], d, w);
      if (scores) scores->q[(k + 1) * n + i] = static_cast<float>(q);
      if (q > best) {
        best = q;
        best_class = ys[k];
      }
    }
    if (scores) scores->q[i] = static_cast<float>(background);
    out.values[i] = static_cast<std::uint8_t>(background > best ? 0 : best_class);
  }
  return out;
}

SaliencyMap load_saliency(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  SaliencyMap out;
  if (ext == ".png") {
    const PngImage img = read_png(path);
    if (img.channels != 1) {
      throw IoError(path.string() + ": saliency PNG must be single-channel, found " + std::to_string(img.channels) +
                    " channels");
    }
    out.height = img.height;
    out.width = img.width;
    out.values.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) out.values[i] = static_cast<float>(img.pixels[i]) / 255.0f;
    return out;
  }
  if (ext == ".setn") {
    const Tensor t = load_tensor(path);
    if (!(t.rank() == 2 || (t.rank() == 3 && t.dim(0) == 1))) {
      throw IoError(path.string() + ": saliency tensor must be [H,W] or [1,H,W], got " + shape_str(t.shape()));
    }
    const std::size_t h = t.dim(t.rank() - 2), w = t.dim(t.rank() - 1);
    AttentionMap raw(h, w, std::vector<float>(t.data().begin(), t.data().end()));
    for (float v : raw.values) {
      if (!(v >= 0.0f)) throw IoError(path.string() + ": saliency tensor contains negative or NaN values");
    }
    const AttentionMap unit = normalize_map(raw);
    out.height = h;
    out.width = w;
    out.values = unit.values;
    return out;
  }
  throw IoError(path.string() + ": unsupported saliency format (expected .png or .setn)");
}

void save_saliency_png(const std::filesystem::path& path, const SaliencyMap& saliency) {
  std::vector<std::uint8_t> gray(saliency.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = to_u8(saliency.values[i]);
  write_png_gray(path, saliency.height, saliency.width, gray);
}

}  // namespace seenet
