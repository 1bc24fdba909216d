#include "seenet/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "seenet/rng.hpp"

namespace seenet {
namespace {

namespace fs = std::filesystem;

enum class ShapeKind { disk, square, triangle, ring, cross };
constexpr std::size_t kShapeKinds = 5;

using Rgb = std::array<float, 3>;
constexpr std::array<Rgb, 7> kPalette{{{0.85f, 0.15f, 0.15f},
                                       {0.15f, 0.70f, 0.20f},
                                       {0.20f, 0.30f, 0.90f},
                                       {0.90f, 0.85f, 0.15f},
                                       {0.80f, 0.20f, 0.80f},
                                       {0.15f, 0.80f, 0.80f},
                                       {0.95f, 0.55f, 0.10f}}};

ShapeKind class_shape(std::size_t cls) { return static_cast<ShapeKind>((cls - 1) % kShapeKinds); }
Rgb class_color(std::size_t cls) { return kPalette[(cls - 1) % kPalette.size()]; }

struct Object {
  std::size_t cls;
  double cx, cy, radius, angle;
  Rgb color;
};

struct Distractor {
  std::size_t cls;
  double cx, cy, half_len, half_wid, angle;
  double period;
};

void to_local(double x, double y, double cx, double cy, double angle, double& u, double& v) {
  const double dx = x - cx, dy = y - cy;
  const double c = std::cos(angle), s = std::sin(angle);
  u = c * dx + s * dy;
  v = -s * dx + c * dy;
}

bool inside(const Object& o, double x, double y) {
  double u = 0, v = 0;
  to_local(x, y, o.cx, o.cy, o.angle, u, v);
  u /= o.radius;
  v /= o.radius;
  const double r2 = u * u + v * v;
  switch (class_shape(o.cls)) {
    case ShapeKind::disk: return r2 <= 1.0;
    case ShapeKind::square: return std::abs(u) <= 0.85 && std::abs(v) <= 0.85;
    case ShapeKind::triangle: return v <= 0.6 && v >= -1.0 + 1.6 * std::abs(u);
    case ShapeKind::ring: return r2 <= 1.0 && r2 >= 0.3;
    case ShapeKind::cross: return (std::abs(u) <= 0.35 && std::abs(v) <= 1.0) || (std::abs(v) <= 0.35 && std::abs(u) <= 1.0);
  }
  return false;
}

// Smooth value noise on a lattice of `cells` cells per side, in [0,1].
std::vector<float> value_noise(Rng& rng, std::size_t side, std::size_t cells) {
  std::vector<float> lattice((cells + 1) * (cells + 1));
  for (auto& v : lattice) v = static_cast<float>(rng.uniform());
  std::vector<float> out(side * side);
  const double scale = static_cast<double>(cells) / static_cast<double>(side);
  for (std::size_t y = 0; y < side; ++y) {
    const double fy = (static_cast<double>(y) + 0.5) * scale;
    const auto y0 = std::min(static_cast<std::size_t>(fy), cells - 1);
    const double ty = fy - static_cast<double>(y0);
    const double sy = ty * ty * (3 - 2 * ty);
    for (std::size_t x = 0; x < side; ++x) {
      const double fx = (static_cast<double>(x) + 0.5) * scale;
      const auto x0 = std::min(static_cast<std::size_t>(fx), cells - 1);
      const double tx = fx - static_cast<double>(x0);
      const double sx = tx * tx * (3 - 2 * tx);
      const double a = lattice[y0 * (cells + 1) + x0], b = lattice[y0 * (cells + 1) + x0 + 1];
      const double c = lattice[(y0 + 1) * (cells + 1) + x0], d = lattice[(y0 + 1) * (cells + 1) + x0 + 1];
      const double top = a + (b - a) * sx, bottom = c + (d - c) * sx;
      out[y * side + x] = static_cast<float>(top + (bottom - top) * sy);
    }
  }
  return out;
}

float quantize(double v) { return static_cast<float>(to_u8(static_cast<float>(v))) / 255.0f; }

std::vector<Object> sample_objects(Rng& rng, const SynthConfig& cfg) {
  const double side = static_cast<double>(cfg.image_side);
  const double roll = rng.uniform();
  const std::size_t count = roll < 0.5 ? 1 : (roll < 0.8 ? 2 : 3);
  std::vector<Object> objects;
  for (std::size_t k = 0; k < count; ++k) {
    Object o{};
    o.cls = 1 + rng.index(cfg.num_classes);
    const bool large = rng.uniform() < cfg.large_object_prob;
    if (large) {
      o.radius = side * rng.uniform(0.38, 0.46);
      o.cx = side * rng.uniform(0.42, 0.58);
      o.cy = side * rng.uniform(0.42, 0.58);
    } else {
      o.radius = side * rng.uniform(0.12, 0.24);
      o.cx = rng.uniform(o.radius * 0.8, side - o.radius * 0.8);
      o.cy = rng.uniform(o.radius * 0.8, side - o.radius * 0.8);
    }
    o.angle = rng.uniform(0.0, 2.0 * M_PI);
    const Rgb base = class_color(o.cls);
    for (std::size_t c = 0; c < 3; ++c) {
      o.color[c] = static_cast<float>(std::clamp(base[c] + rng.uniform(-0.08, 0.08), 0.0, 1.0));
    }
    objects.push_back(o);
  }
  return objects;
}

// Striped band placed against the object boundary: background in the ground
// truth, but it only ever appears next to objects of its class.
Distractor make_distractor(Rng& rng, const Object& o) {
  Distractor d{};
  d.cls = o.cls;
  const double dir = rng.uniform(0.0, 2.0 * M_PI);
  d.half_wid = 0.3 * o.radius + 1.0;
  d.half_len = 0.9 * o.radius + 2.0;
  const double offset = o.radius + d.half_wid;
  d.cx = o.cx + std::cos(dir) * offset;
  d.cy = o.cy + std::sin(dir) * offset;
  d.angle = dir;  // band runs tangentially to the object
  d.period = 3.0 + static_cast<double>((o.cls - 1) % 3);
  return d;
}

bool in_band(const Distractor& d, double x, double y, double& along) {
  double u = 0, v = 0;
  to_local(x, y, d.cx, d.cy, d.angle, u, v);
  along = v;
  return std::abs(u) <= d.half_wid && std::abs(v) <= d.half_len;
}

std::vector<float> gaussian_blur(const std::vector<float>& src, std::size_t h, std::size_t w, double sigma) {
  if (sigma <= 0.0) return src;
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double norm = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    kernel[static_cast<std::size_t>(i + radius)] = v;
    norm += v;
  }
  for (auto& v : kernel) v /= norm;
  const auto ih = static_cast<std::ptrdiff_t>(h), iw = static_cast<std::ptrdiff_t>(w);
  std::vector<float> tmp(src.size()), out(src.size());
  for (std::ptrdiff_t y = 0; y < ih; ++y) {
    for (std::ptrdiff_t x = 0; x < iw; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::ptrdiff_t xx = std::clamp(x + k, std::ptrdiff_t{0}, iw - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * src[static_cast<std::size_t>(y * iw + xx)];
      }
      tmp[static_cast<std::size_t>(y * iw + x)] = static_cast<float>(acc);
    }
  }
  for (std::ptrdiff_t y = 0; y < ih; ++y) {
    for (std::ptrdiff_t x = 0; x < iw; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::ptrdiff_t yy = std::clamp(y + k, std::ptrdiff_t{0}, ih - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * tmp[static_cast<std::size_t>(yy * iw + x)];
      }
      out[static_cast<std::size_t>(y * iw + x)] = static_cast<float>(acc);
    }
  }
  return out;
}

std::uint64_t saliency_seed(std::uint64_t sample_seed) { return splitmix64(sample_seed ^ 0x5a11e9c7ULL); }

}  // namespace

void SynthConfig::validate() const {
  if (n < 1) throw ConfigError("dataset size n must be >= 1");
  if (num_classes < 2 || num_classes > 20) throw ConfigError("num_classes must lie in [2, 20]");
  if (image_side < 32) throw ConfigError("image_side must be >= 32");
  if (!(saliency_noise >= 0.0 && saliency_noise <= 0.5)) throw ConfigError("saliency noise must lie in [0, 0.5]");
  if (!(distractor_prob >= 0.0 && distractor_prob <= 1.0)) throw ConfigError("distractor_prob must lie in [0, 1]");
  if (!(large_object_prob >= 0.0 && large_object_prob <= 1.0)) throw ConfigError("large_object_prob must lie in [0, 1]");
}

std::string sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%06zu", index);
  return buf;
}

SampleRecord generate_sample(const SynthConfig& cfg, std::size_t index) {
  cfg.validate();
  const std::size_t side = cfg.image_side;
  const std::size_t plane = side * side;
  SampleRecord rec;
  rec.id = sample_id(index);
  rec.seed = derive_seed(cfg.seed, index);
  Rng rng(rec.seed);

  // Layout: resample until every class keeps at least 1% of the pixels.
  std::vector<Object> objects;
  LabelMap gt(side, side, 0);
  for (int attempt = 0;; ++attempt) {
    objects = sample_objects(rng, cfg);
    std::fill(gt.values.begin(), gt.values.end(), 0);
    for (std::size_t y = 0; y < side; ++y) {
      for (std::size_t x = 0; x < side; ++x) {
        for (const auto& o : objects) {
          if (inside(o, static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5)) {
            gt.values[y * side + x] = static_cast<std::uint8_t>(o.cls);
          }
        }
      }
    }
    std::vector<std::size_t> area(cfg.num_classes + 1, 0);
    for (auto v : gt.values) ++area[v];
    bool ok = true;
    for (const auto& o : objects) ok = ok && area[o.cls] * 100 >= plane;
    if (ok || attempt >= 1000) break;
  }

  // Background texture.
  Rgb tint{};
  for (auto& t : tint) t = static_cast<float>(rng.uniform(0.3, 0.6));
  const auto coarse = value_noise(rng, side, 4);
  const auto fine = value_noise(rng, side, 16);
  std::vector<float> pixels(3 * plane);
  for (std::size_t i = 0; i < plane; ++i) {
    const double texture = 0.6 * coarse[i] + 0.4 * fine[i] - 0.5;
    for (std::size_t c = 0; c < 3; ++c) pixels[c * plane + i] = static_cast<float>(tint[c] + 0.35 * texture);
  }

  std::vector<Distractor> distractors;
  for (const auto& o : objects) {
    if (rng.uniform() < cfg.distractor_prob) distractors.push_back(make_distractor(rng, o));
  }
  for (const auto& d : distractors) {
    const Rgb base = class_color(d.cls);
    for (std::size_t y = 0; y < side; ++y) {
      for (std::size_t x = 0; x < side; ++x) {
        double along = 0;
        if (!in_band(d, static_cast<double>(x) + 0.5, static_cast<double>(y) + 0.5, along)) continue;
        const double phase = std::fmod(std::abs(along), d.period) / d.period;
        const double stripe = phase < 0.5 ? 1.0 : 0.35;
        for (std::size_t c = 0; c < 3; ++c) {
          pixels[c * plane + y * side + x] = static_cast<float>(stripe * (0.55 * base[c] + 0.15));
        }
      }
    }
  }

  const auto shading = value_noise(rng, side, 8);
  for (std::size_t i = 0; i < plane; ++i) {
    const std::uint8_t cls = gt.values[i];
    if (cls == 0) continue;
    // top-most object of that class at this pixel supplies the color
    const double x = static_cast<double>(i % side) + 0.5, y = static_cast<double>(i / side) + 0.5;
    Rgb color{};
    for (const auto& o : objects) {
      if (inside(o, x, y)) color = o.color;
    }
    const double shade = 0.85 + 0.3 * (shading[i] - 0.5);
    for (std::size_t c = 0; c < 3; ++c) pixels[c * plane + i] = static_cast<float>(color[c] * shade);
  }
  for (auto& v : pixels) v = quantize(v);

  rec.image = Tensor(Shape{3, side, side}, std::move(pixels));
  rec.gt = std::move(gt);
  for (const auto& o : objects) rec.classes.push_back(o.cls);
  std::sort(rec.classes.begin(), rec.classes.end());
  rec.classes.erase(std::unique(rec.classes.begin(), rec.classes.end()), rec.classes.end());

  rec.saliency = synthetic_saliency(rec, cfg.saliency_noise);
  for (auto& v : rec.saliency.values) v = quantize(v);
  return rec;
}

std::vector<SampleRecord> generate_samples(const SynthConfig& config) {
  config.validate();
  std::vector<SampleRecord> out;
  out.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) out.push_back(generate_sample(config, i));
  return out;
}

SaliencyMap synthetic_saliency(const SampleRecord& sample, double noise, std::optional<double> sigma) {
  if (!(noise >= 0.0 && noise <= 0.5)) throw ConfigError("saliency noise must lie in [0, 0.5]");
  const std::size_t h = sample.gt.height, w = sample.gt.width;
  std::vector<float> mask(h * w);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = sample.gt.values[i] != 0 ? 1.0f : 0.0f;
  const double s = sigma.value_or(static_cast<double>(std::max(h, w)) / 64.0);
  auto blurred = gaussian_blur(mask, h, w, s);
  Rng rng(saliency_seed(sample.seed));
  SaliencyMap out;
  out.height = h;
  out.width = w;
  out.values.resize(h * w);
  for (std::size_t i = 0; i < blurred.size(); ++i) {
    const double jitter = noise > 0.0 ? rng.uniform(-noise, noise) : 0.0;
    out.values[i] = static_cast<float>(std::clamp(blurred[i] + jitter, 0.0, 1.0));
  }
  return out;
}

nlohmann::json gen_dataset(const SynthConfig& config, const fs::path& out_dir) {
  config.validate();
  std::error_code ec;
  for (const char* sub : {"images", "gt", "saliency"}) {
    fs::create_directories(out_dir / sub, ec);
    if (ec) throw IoError("cannot create " + (out_dir / sub).string() + ": " + ec.message());
  }
  nlohmann::json samples = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::object();
  for (std::size_t i = 0; i < config.n; ++i) {
    const SampleRecord rec = generate_sample(config, i);
    const std::string image = "images/" + rec.id + ".png";
    const std::string gt = "gt/" + rec.id + ".png";
    const std::string sal = "saliency/" + rec.id + ".png";
    write_png_rgb(out_dir / image, rec.image);
    write_png_indexed(out_dir / gt, rec.gt);
    save_saliency_png(out_dir / sal, rec.saliency);
    samples.push_back({{"id", rec.id}, {"image", image}, {"gt", gt}, {"saliency", sal}, {"labels", rec.classes}});
    labels[rec.id] = rec.classes;
  }
  nlohmann::json manifest{{"samples", samples},
                          {"num_classes", config.num_classes},
                          {"seed", config.seed},
                          {"image_side", config.image_side}};
  auto write_json = [&](const fs::path& p, const nlohmann::json& j) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p.string());
    out << j.dump(1) << "\n";
  };
  write_json(out_dir / "manifest.json", manifest);
  write_json(out_dir / "labels.json", labels);
  return manifest;
}

Dataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(manifest_path.string() + ": " + e.what());
  }
  const auto num_classes = manifest.at("num_classes").get<std::size_t>();
  const auto seed = manifest.value("seed", std::uint64_t{0});
  Dataset out;
  out.num_classes = num_classes;
  std::size_t index = 0;
  for (const auto& s : manifest.at("samples")) {
    SampleRecord rec;
    rec.id = s.at("id").get<std::string>();
    rec.seed = derive_seed(seed, index++);
    rec.image = load_rgb_image(dir / s.at("image").get<std::string>());
    rec.classes = s.at("labels").get<std::vector<std::size_t>>();
    for (std::size_t c : rec.classes) {
      if (c < 1 || c > num_classes) throw IoError(manifest_path.string() + ": label out of range for " + rec.id);
    }
    if (s.contains("gt")) rec.gt = load_label_png(dir / s.at("gt").get<std::string>());
    if (s.contains("saliency")) rec.saliency = load_saliency(dir / s.at("saliency").get<std::string>());
    out.samples.push_back(std::move(rec));
  }
  return out;
}

}  // namespace seenet
