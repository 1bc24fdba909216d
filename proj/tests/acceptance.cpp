// Acceptance runner. Usage: seenet_acceptance [criterion numbers...]
// Prints one PASS/FAIL line per criterion; exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "seenet/ablation.hpp"
#include "seenet/allocator.hpp"
#include "seenet/eval.hpp"
#include "seenet/gradcheck_suite.hpp"
#include "seenet/masks.hpp"
#include "seenet/model.hpp"
#include "seenet/ops.hpp"
#include "seenet/proxy_gt.hpp"
#include "seenet/synth.hpp"
#include "seenet/trainer.hpp"

namespace fs = std::filesystem;
using namespace seenet;

namespace {

// Tolerances and budgets.
constexpr double kGradTolerance = 1e-3;
constexpr std::size_t kGradSeeds = 100;
constexpr double kGradBudgetSeconds = 60.0;
constexpr std::size_t kReluRandomTensors = 10000;
constexpr std::size_t kMaskMaps = 1000;
constexpr std::size_t kErasingImages = 50;
constexpr std::size_t kProxyInstances = 100;
constexpr double kHarmonicTolerance = 1e-9;
constexpr std::size_t kMiouInstances = 100;
constexpr std::size_t kFusionTrials = 500;
constexpr double kAblationBudgetSeconds = 30.0 * 60.0;
constexpr double kSmokeBudgetSeconds = 180.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records the first failure message; later ones are counted only.
  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
    ++failures;
  }
  std::string first_failure;
  std::size_t failures = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1 -------------------------------------------------------------------

void gradient_correctness(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::uint64_t worst_seed = 0;
  std::string worst_entry;
  std::size_t checked = 0, skipped = 0;
  std::set<std::string> covered;
  for (std::uint64_t seed = 1; seed <= kGradSeeds; ++seed) {
    const GradCheckReport r = run_gradcheck_suite(seed);
    checked += r.checked;
    skipped += r.skipped;
    for (const auto& e : r.entries) {
      covered.insert(e.name.substr(0, e.name.find_first_of(".[")));
      if (e.result.max_rel_error > worst) {
        worst = e.result.max_rel_error;
        worst_seed = seed;
        worst_entry = e.name;
      }
    }
  }
  const double secs = seconds_since(t0);
  if (!(worst <= kGradTolerance)) {
    o.fail("max relative error " + std::to_string(worst) + " at seed " + std::to_string(worst_seed) + " (" +
           worst_entry + ")");
  }
  for (const char* op : {"conv2d", "global_avg_pool", "bce_multilabel_loss", "c_relu", "three_branch_loss"}) {
    if (!covered.count(op)) o.fail(std::string("suite does not cover ") + op);
  }
  if (secs >= kGradBudgetSeconds) o.fail("runtime " + std::to_string(secs) + " s over budget");
  o.detail << "seeds=" << kGradSeeds << " max_rel_error=" << worst << " (" << worst_entry << ", tol "
           << kGradTolerance << ") checked=" << checked << " skipped_at_kinks=" << skipped << " runtime=" << std::fixed
           << std::setprecision(1) << secs << "s";
}

// ---- 2 -------------------------------------------------------------------

float relu_times_mask(float x, signed char m) { return (x > 0.0f ? x : 0.0f) * static_cast<float>(m); }

void c_relu_semantics(Outcome& o) {
  std::size_t cases = 0;
  const float xs[] = {-2.5f, -0.0f, 0.0f, 1.75f};
  const signed char ms[] = {-1, 0, 1};
  for (float x : xs) {
    for (signed char m : ms) {
      const Tensor t(Shape{1, 1, 1}, std::vector<float>{x});
      const float y = c_relu(t, MaskMap(1, 1, m))[0];
      const float want = relu_times_mask(x, m);
      if (y != want) o.fail("c_relu(" + std::to_string(x) + ", " + std::to_string(m) + ") = " + std::to_string(y));
      ++cases;
    }
  }

  Rng rng(2024);
  std::size_t elements = 0;
  for (std::size_t t = 0; t < kReluRandomTensors; ++t) {
    const std::size_t c = 1 + rng.index(3), h = 1 + rng.index(6), w = 1 + rng.index(6);
    std::vector<float> v(c * h * w);
    for (auto& x : v) {
      const double u = rng.uniform();
      x = u < 0.1 ? 0.0f : static_cast<float>(rng.normal() * std::pow(10.0, rng.uniform(-3.0, 3.0)));
    }
    std::vector<signed char> mv(h * w);
    for (auto& m : mv) m = static_cast<signed char>(static_cast<int>(rng.index(3)) - 1);
    const Tensor x(Shape{c, h, w}, v);
    const MaskMap mask(h, w, mv);
    const Tensor y = c_relu(x, mask);
    for (std::size_t k = 0; k < c; ++k) {
      for (std::size_t i = 0; i < h * w; ++i) {
        const std::size_t idx = k * h * w + i;
        if (y[idx] != relu_times_mask(v[idx], mv[i])) o.fail("random tensor " + std::to_string(t) + " differs");
      }
    }
    elements += v.size();
  }
  o.detail << "exhaustive_cases=" << cases << " random_tensors=" << kReluRandomTensors << " elements=" << elements
           << " tolerance=exact";
}

// ---- 3 -------------------------------------------------------------------

// Values on a 2^-12 grid with dyadic factors keep k*max exact in float.
AttentionMap quantized_map(Rng& rng, std::size_t h, std::size_t w) {
  AttentionMap m = oracle::random_map(rng, h, w);
  for (auto& v : m.values) v = std::round(v * 4096.0f) / 4096.0f;
  return m;
}

bool subset(const std::vector<signed char>& a, signed char code_a, const std::vector<signed char>& b,
            signed char code_b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == code_a && b[i] != code_b) return false;
  }
  return true;
}

void mask_invariants(Outcome& o) {
  Rng rng(31337);
  std::size_t boundary_checks = 0, scale_checks = 0, zero_maps = 0;
  for (std::size_t trial = 0; trial < kMaskMaps; ++trial) {
    const std::size_t h = 2 + rng.index(15), w = 3 + rng.index(14);
    AttentionMap m = trial % 50 == 0 ? AttentionMap(h, w, 0.0f) : quantized_map(rng, h, w);
    const double kh = static_cast<double>(8 + rng.index(56)) / 64.0;
    const double kl = static_cast<double>(rng.index(static_cast<std::size_t>(kh * 64.0))) / 64.0;
    const float mx = m.max();
    // Two pixels other than the peak sit exactly on the thresholds.
    std::size_t at_h = 0, at_l = 1;
    if (mx > 0.0f) {
      const std::size_t peak = static_cast<std::size_t>(
          std::max_element(m.values.begin(), m.values.end()) - m.values.begin());
      if (at_h == peak) at_h = 2;
      if (at_l == peak) at_l = 2;
      m.values[at_h] = static_cast<float>(kh * mx);
      m.values[at_l] = static_cast<float>(kl * mx);
    }
    if (mx == 0.0f) ++zero_maps;
    const std::string tag = "map " + std::to_string(trial);

    const TernaryMask t = ternary_mask(m, kh, kl);
    const MaskMap sc = mask_for_sc(m, kh, kl);
    const ZoneCounts counts = t.counts();
    if (counts.attention + counts.potential + counts.background != m.size()) o.fail(tag + ": zones do not partition");
    const long double mid = 0.5L * (static_cast<long double>(kh) + static_cast<long double>(kl)) * mx;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (t.codes()[i] != oracle::zone_code(m.values[i], mx, kh, kl)) o.fail(tag + ": zone differs from oracle");
      const int want_sc = mx > 0.0f ? (static_cast<long double>(m.values[i]) < mid ? 1 : 0) : 1;
      if (sc.values[i] != want_sc) o.fail(tag + ": S_C background zone differs from oracle");
    }
    if (mask_for_sb(t).values != t.codes()) o.fail(tag + ": S_B mask is not the ternary mask");

    if (mx > 0.0f) {
      if (t.zone(at_h) != Zone::attention) o.fail(tag + ": value == k_h*max is not attention");
      if (kl > 0.0 && t.zone(at_l) != Zone::potential) o.fail(tag + ": value == k_l*max is not potential");
      boundary_checks += 2;
    } else if (mx == 0.0f && counts.background != m.size()) {
      o.fail(tag + ": all-zero map is not all background");
    }

    for (int e : {-7, -1, 1, 5}) {
      AttentionMap scaled = m;
      for (auto& v : scaled.values) v = std::ldexp(v, e);
      if (!(ternary_mask(scaled, kh, kl) == t) || mask_for_sc(scaled, kh, kl).values != sc.values) {
        o.fail(tag + ": masks change under scale 2^" + std::to_string(e));
      }
      ++scale_checks;
    }

    const double kh_up = std::min(1.0, kh + 1.0 / 64.0);
    const double kl_up = std::min(kh - 1.0 / 128.0, kl + 1.0 / 64.0);
    const TernaryMask higher_h = ternary_mask(m, kh_up, kl);
    const TernaryMask higher_l = ternary_mask(m, kh, kl_up);
    if (!subset(higher_h.codes(), 0, t.codes(), 0)) o.fail(tag + ": attention zone grows with k_h");
    if (!subset(t.codes(), -1, higher_l.codes(), -1)) o.fail(tag + ": background zone shrinks with k_l");
  }
  o.detail << "maps=" << kMaskMaps << " all_zero_maps=" << zero_maps << " boundary_checks=" << boundary_checks
           << " power_of_two_scalings=" << scale_checks << " tolerance=exact";
}

// ---- 4 -------------------------------------------------------------------

void erasing_invariants(Outcome& o) {
  SynthConfig sc;
  sc.n = kErasingImages;
  sc.num_classes = 6;
  sc.image_side = 64;
  sc.seed = 77;
  const auto samples = generate_samples(sc);
  ModelConfig mc;
  mc.num_classes = sc.num_classes;
  mc.branch_channels = 16;
  mc.branch_depth = 2;
  mc.strategy = Strategy::seenet;
  const SeeNet net(mc, 5);

  std::size_t att_px = 0, bg_px = 0, negative_bg = 0, c_blank = 0;
  for (const auto& s : samples) {
    const LabelSet labels = channels_for(s.classes, mc.num_classes);
    const auto out = net.forward(s.image, labels);
    const AttentionMap& a = out.attention_a;
    const float mx = a.max();
    const long double mid = 0.5L * (static_cast<long double>(mc.k_h) + static_cast<long double>(mc.k_l)) * mx;
    const std::size_t plane = a.size();
    for (std::size_t i = 0; i < plane; ++i) {
      const int zone = oracle::zone_code(a.values[i], mx, mc.k_h, mc.k_l);
      const bool c_background = mx == 0.0f || static_cast<long double>(a.values[i]) < mid;
      att_px += zone == 0;
      bg_px += zone == -1;
      c_blank += !c_background;
      for (std::size_t c = 0; c < out.features_b.dim(0); ++c) {
        const float fb = out.features_b[c * plane + i];
        const float fc = out.features_c[c * plane + i];
        if (zone == 0 && fb != 0.0f) o.fail(s.id + ": S_B input non-zero on attention zone");
        if (zone == -1 && !(fb <= 0.0f)) o.fail(s.id + ": S_B input positive on background zone");
        if (zone == -1 && fb < 0.0f) ++negative_bg;
        if (!c_background && fc != 0.0f) o.fail(s.id + ": S_C input non-zero outside its background zone");
      }
    }
  }
  if (att_px == 0 || bg_px == 0 || negative_bg == 0) o.fail("vacuous: some zone never occurred");
  o.detail << "images=" << kErasingImages << " attention_px=" << att_px << " background_px=" << bg_px
           << " negative_SB_entries=" << negative_bg << " SC_erased_px=" << c_blank << " tolerance=exact";
}

// ---- 5 -------------------------------------------------------------------

void proxy_gt_oracle(Outcome& o) {
  {
    const SaliencyMap d{1, 2, {0.8f, 0.1f}};
    const std::size_t c = 3;
    const std::map<std::size_t, AttentionMap> maps{{c, AttentionMap(1, 2, std::vector<float>{0.9f, 0.2f}, true)}};
    ProxyScores q;
    const LabelMap g = generate_proxy_gt(d, maps, {c}, 1.0, &q);
    if (g.values != std::vector<std::uint8_t>{static_cast<std::uint8_t>(c), 0}) o.fail("worked example G != [c, 0]");
    const double q_c0 = oracle::harmonic(0.9L, 0.8L), q_c1 = oracle::harmonic(0.2L, 0.1L);
    if (std::abs(q.q[2] - q_c0) > 1e-6 || std::abs(q.q[3] - q_c1) > 1e-6) o.fail("worked example scores");
    if (std::abs(q.q[0] - 0.2) > 1e-6 || std::abs(q.q[1] - 0.9) > 1e-6) o.fail("worked example background row");
    o.detail << "worked_example G=[c," << int(g.values[1]) << "] Q(c)=[" << std::setprecision(4) << q.q[2] << ","
             << q.q[3] << "]; ";
  }
  Rng rng(5151);
  std::size_t tie_instances = 0;
  for (std::size_t trial = 0; trial < kProxyInstances; ++trial) {
    const SaliencyMap d = oracle::random_saliency(rng, 16, 16);
    std::vector<std::size_t> classes;
    std::map<std::size_t, AttentionMap> maps;
    const std::size_t k = 1 + rng.index(3);
    while (classes.size() < k) {
      const std::size_t c = 1 + rng.index(20);
      if (maps.count(c)) continue;
      if (!maps.empty() && rng.uniform() < 0.3) {
        maps.emplace(c, maps.begin()->second);
        ++tie_instances;
      } else {
        maps.emplace(c, oracle::random_map(rng, 16, 16, true));
      }
      classes.push_back(c);
    }
    maps.emplace(21 + trial % 5, oracle::random_map(rng, 16, 16, true));  // not in y; must be ignored
    const double w = trial % 2 == 0 ? 1.0 : rng.uniform(0.25, 4.0);
    if (generate_proxy_gt(d, maps, classes, w) != oracle::proxy_gt(d, maps, classes, w)) {
      o.fail("instance " + std::to_string(trial) + " differs from brute force");
    }
  }
  o.detail << "instances=" << kProxyInstances << " size=16x16 |y|<=3 duplicate_map_instances=" << tie_instances
           << " tolerance=exact";
}

// ---- 6 -------------------------------------------------------------------

void harmonic_properties(Outcome& o) {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(i / 40.0);
  for (double a : grid) {
    for (double d : grid) {
      if (harmonic_mean(a, d) != harmonic_mean(d, a)) o.fail("asymmetric at w=1");
      for (double w : {0.5, 1.0, 2.0}) {
        const double h = harmonic_mean(a, d, w);
        if (a + 0.025 <= 1.0 && harmonic_mean(a + 0.025, d, w) < h) o.fail("not monotone in attention");
        if (d + 0.025 <= 1.0 && harmonic_mean(a, d + 0.025, w) < h) o.fail("not monotone in saliency");
      }
    }
    if (harmonic_mean(a, 0.0) != 0.0 || harmonic_mean(0.0, a) != 0.0) o.fail("harm with a zero argument != 0");
  }
  if (harmonic_mean(1.0, 1.0) != 1.0) o.fail("harm(1,1) != 1");
  const long double ref = 8.0L / 15.0L;
  const double got = harmonic_mean(0.8, 0.4);
  const double err = static_cast<double>(std::abs(static_cast<long double>(got) - ref));
  if (!(err <= kHarmonicTolerance)) o.fail("harm(0.8,0.4) off by " + std::to_string(err));
  o.detail << "grid=41x41 w={0.5,1,2} harm(1,1)=" << harmonic_mean(1.0, 1.0) << " harm(0.8,0.4)=" << std::setprecision(17)
           << got << " |err|=" << std::setprecision(3) << err << " (tol " << kHarmonicTolerance << ")";
}

// ---- 7 -------------------------------------------------------------------

void miou_oracle(Outcome& o) {
  {
    const LabelMap gt(1, 4, 0), pred(1, 4, 0);
    LabelMap g = gt, p = pred;
    g.values = {0, 0, 1, 1};
    p.values = {0, 1, 1, 1};
    ConfusionMatrix cm(1);
    confusion_accumulate(p, g, cm);
    const IouReport r = miou(cm);
    if (r.mean != 7.0 / 12.0 || r.per_class[0] != 0.5 || r.per_class[1] != 2.0 / 3.0) o.fail("toy example != 7/12");
    o.detail << "toy mIoU=" << std::setprecision(17) << r.mean << "; ";
  }
  Rng rng(8080);
  for (std::size_t trial = 0; trial < kMiouInstances; ++trial) {
    const std::size_t m = 1 + rng.index(5);
    const std::size_t images = 1 + rng.index(3);
    const bool use_ignore = trial % 3 == 0;
    std::vector<LabelMap> preds, gts;
    for (std::size_t k = 0; k < images; ++k) {
      preds.push_back(oracle::random_labels(rng, 8, 8, m, use_ignore ? 0.1 : 0.0));
      gts.push_back(oracle::random_labels(rng, 8, 8, m, use_ignore ? 0.1 : 0.0));
    }
    std::vector<const LabelMap*> pp, gp;
    ConfusionMatrix cm(m);
    const std::optional<std::uint8_t> ignore =
        use_ignore ? std::optional<std::uint8_t>(kDefaultIgnoreLabel) : std::nullopt;
    for (std::size_t k = 0; k < images; ++k) {
      pp.push_back(&preds[k]);
      gp.push_back(&gts[k]);
      confusion_accumulate(preds[k], gts[k], cm, ignore);
    }
    const auto want_cm = oracle::confusion(pp, gp, m, ignore);
    for (std::size_t g = 0; g <= m; ++g) {
      for (std::size_t p = 0; p <= m; ++p) {
        if (cm.at(g, p) != want_cm[g][p]) o.fail("confusion differs on instance " + std::to_string(trial));
      }
    }
    const auto want = oracle::miou(pp, gp, m, ignore);
    const IouReport got = miou(cm);
    if (got.per_class != want.per_class || !want.mean || got.mean != *want.mean) {
      o.fail("mIoU differs on instance " + std::to_string(trial));
    }
  }
  o.detail << "instances=" << kMiouInstances << " size=8x8 M<=5 tolerance=exact";
}

// ---- 8 -------------------------------------------------------------------

AttentionMap pointwise_max(const AttentionMap& a, const AttentionMap& b) {
  AttentionMap out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = std::max(a.values[i], b.values[i]);
  return out;
}

bool dominated(const AttentionMap& lo, const AttentionMap& hi) {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo.values[i] > hi.values[i]) return false;
  }
  return true;
}

void fusion_algebra(Outcome& o) {
  using Fuse = AttentionMap (*)(const AttentionMap&, const AttentionMap&);
  const std::pair<const char*, Fuse> ops[] = {{"fuse_attention", &fuse_attention}, {"flip_fuse", &flip_fuse}};
  Rng rng(999);
  for (std::size_t trial = 0; trial < kFusionTrials; ++trial) {
    const std::size_t h = 1 + rng.index(12), w = 1 + rng.index(12);
    const AttentionMap a = oracle::random_map(rng, h, w, true);
    const AttentionMap b = oracle::random_map(rng, h, w, true);
    const AttentionMap c = oracle::random_map(rng, h, w, true);
    const AttentionMap a_up = pointwise_max(a, oracle::random_map(rng, h, w, true));
    for (const auto& [name, f] : ops) {
      const std::string tag = std::string(name) + " trial " + std::to_string(trial);
      if (!(f(a, b) == f(b, a))) o.fail(tag + ": not commutative");
      if (!(f(f(a, b), c) == f(a, f(b, c)))) o.fail(tag + ": not associative");
      if (!(f(a, a) == a)) o.fail(tag + ": not idempotent");
      if (!dominated(f(a, b), f(a_up, b))) o.fail(tag + ": not monotone");
      if (!dominated(a, f(a, b)) || !dominated(b, f(a, b))) o.fail(tag + ": not an upper bound");
    }
  }
  o.detail << "trials=" << kFusionTrials << " ops={fuse_attention,flip_fuse} tolerance=exact";
}

// ---- 9 -------------------------------------------------------------------

void scaled_ablation(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const AblationConfig config = AblationConfig::desk();
  const AblationResult r = run_ablation(config, [](const nlohmann::json& line) {
    if (line.value("event", "") == "ablation_run") std::cerr << "  " << line.dump() << "\n";
  });
  const double secs = seconds_since(t0);
  {
    std::ofstream f("ablation_result.json");
    f << to_json(r).dump(1) << "\n";
  }
  const StrategySummary& s = r.summary(Strategy::seenet);
  const StrategySummary& a = r.summary(Strategy::acol);
  const double iou_gap = s.iou_mean - a.iou_mean;
  const double leak_gap = a.leakage_mean - s.leakage_mean;
  const double iou_spread = std::max(s.iou_std, a.iou_std);
  const double leak_spread = std::max(s.leakage_std, a.leakage_std);
  if (!(iou_gap > 0.0)) o.fail("(a) seenet IoU not above acol");
  else if (!(iou_gap > iou_spread)) o.fail("(a) IoU gap within seed spread");
  if (!(leak_gap > 0.0)) o.fail("(b) seenet leakage not below acol");
  else if (!(leak_gap > leak_spread)) o.fail("(b) leakage gap within seed spread");
  if (secs >= kAblationBudgetSeconds) o.fail("runtime over 30 min");
  o.detail << std::setprecision(4) << "seenet IoU=" << s.iou_mean << "±" << s.iou_std << " leak=" << s.leakage_mean
           << "±" << s.leakage_std << " | acol IoU=" << a.iou_mean << "±" << a.iou_std << " leak=" << a.leakage_mean
           << "±" << a.leakage_std << " | IoU gap " << iou_gap << " vs std " << iou_spread << ", leak gap "
           << leak_gap << " vs std " << leak_spread << " | runtime=" << std::fixed << std::setprecision(0) << secs
           << "s";
}

// ---- 10, 11 ----------------------------------------------------------------

int sh(const fs::path& cwd, const std::string& args) {
  const std::string cmd = "cd '" + cwd.string() + "' && '" SEENET_CLI "' " + args + " > cli_stdout.txt 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = slurp(e.path());
  }
  return files;
}

const std::string kTrainArgs =
    "--iters 60 --batch 4 --lr 0.01 --warmup 20 --lr-drop-at 40 --branch-channels 16 --metric-every 20 "
    "--metric-samples 8 --seed 9 --quiet";

void determinism(Outcome& o) {
  std::vector<std::map<std::string, std::string>> stages[3];
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path dir = fresh_dir("seenet_determinism_" + std::to_string(rep));
    if (sh(dir, "gen-data --out data --n 24 --classes 4 --side 48 --seed 11") != 0) o.fail("gen-data failed");
    if (sh(dir, "train --data data --out run " + kTrainArgs) != 0) o.fail("train failed");
    if (sh(dir, "attend --checkpoint run/checkpoint.seck --data data --out att --input-side 48 --dump-masks") != 0) {
      o.fail("attend failed");
    }
    stages[0].push_back(tree(dir / "data"));
    stages[1].push_back(tree(dir / "run"));
    stages[2].push_back(tree(dir / "att"));
  }
  const char* names[] = {"gen-data", "train", "attend"};
  std::size_t files = 0, bytes = 0;
  for (int s = 0; s < 3; ++s) {
    if (stages[s][0].empty()) o.fail(std::string(names[s]) + " produced nothing");
    if (stages[s][0] != stages[s][1]) {
      std::string which;
      for (const auto& [k, v] : stages[s][0]) {
        auto it = stages[s][1].find(k);
        if (it == stages[s][1].end() || it->second != v) which = k;
      }
      o.fail(std::string(names[s]) + " artifacts differ (" + which + ")");
    }
    for (const auto& [k, v] : stages[s][0]) {
      ++files;
      bytes += v.size();
    }
  }
  o.detail << "stages=gen-data,train,attend runs=2 files=" << files << " bytes=" << bytes << " byte_identical="
           << (o.pass ? "yes" : "no");
}

void smoke(Outcome& o) {
  const fs::path dir = fresh_dir("seenet_smoke");
  const auto t0 = std::chrono::steady_clock::now();
  const std::pair<const char*, std::string> steps[] = {
      {"gen-data", "gen-data --out data --n 64 --classes 5 --side 64 --seed 3"},
      {"train",
       "train --data data --out run --iters 300 --batch 8 --lr 0.01 --warmup 100 --lr-drop-at 200 "
       "--branch-channels 32 --quiet"},
      {"attend", "attend --checkpoint run/checkpoint.seck --data data --out att --input-side 64"},
      {"proxy-gt", "proxy-gt --saliency data/saliency --attention att/attention --labels att/labels.json --out pgt"},
      {"eval", "eval --pred pgt --gt data/gt --classes 5 --out eval.json"},
  };
  for (const auto& [name, args] : steps) {
    const int code = sh(dir, args);
    if (code != 0) {
      o.fail(std::string(name) + " exited " + std::to_string(code));
      break;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= kSmokeBudgetSeconds) o.fail("runtime " + std::to_string(secs) + " s over 3 min");
  nlohmann::json ev;
  try {
    ev = nlohmann::json::parse(slurp(dir / "eval.json"));
    const double m = ev.at("miou").get<double>();
    if (!(m >= 0.0 && m <= 1.0)) o.fail("miou outside [0,1]");
    if (ev.at("per_class_iou").size() != 6) o.fail("per_class_iou length != classes + 1");
    if (ev.at("images").get<int>() != 64) o.fail("eval did not see 64 images");
    if (ev.at("pixels").get<long>() != 64L * 64 * 64) o.fail("pixel count mismatch");
  } catch (const std::exception& e) {
    o.fail(std::string("eval JSON malformed: ") + e.what());
  }
  o.detail << std::setprecision(4) << "miou=" << (ev.contains("miou") ? ev["miou"].dump() : "n/a")
           << " runtime=" << std::fixed << std::setprecision(1) << secs << "s (budget " << kSmokeBudgetSeconds << "s)";
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  retain_heap_memory();
  const std::vector<Criterion> all{
      {1, "gradient correctness", gradient_correctness},
      {2, "C-ReLU semantics", c_relu_semantics},
      {3, "mask pipeline invariants", mask_invariants},
      {4, "erasing invariants at runtime", erasing_invariants},
      {5, "proxy ground truth matches brute force", proxy_gt_oracle},
      {6, "harmonic-mean properties", harmonic_properties},
      {7, "mIoU matches counting oracle", miou_oracle},
      {8, "fusion algebra", fusion_algebra},
      {9, "scaled ablation ordering", scaled_ablation},
      {10, "determinism", determinism},
      {11, "end-to-end smoke", smoke},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail.str();
    if (!o.pass) std::cout << " | first failure: " << o.first_failure << " (" << o.failures << " total)";
    std::cout << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
