#include "seenet/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "seenet/allocator.hpp"
#include "seenet/checkpoint.hpp"
#include "seenet/eval.hpp"
#include "seenet/gradcheck_suite.hpp"
#include "seenet/image.hpp"
#include "seenet/inference.hpp"
#include "seenet/proxy_gt.hpp"
#include "seenet/rng.hpp"
#include "seenet/serialize.hpp"
#include "seenet/synth.hpp"
#include "seenet/trainer.hpp"

namespace seenet {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// One JSON object per line, to a file and optionally echoed to a stream.
class JsonLog {
 public:
  JsonLog(const fs::path& path, std::ostream* echo) : file_(path), echo_(echo) {
    if (!file_) throw IoError("cannot write log " + path.string());
  }
  void operator()(const json& line) {
    const std::string text = line.dump();
    file_ << text << "\n";
    if (echo_) *echo_ << text << "\n";
  }

 private:
  std::ofstream file_;
  std::ostream* echo_;
};

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << "\n";
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> foreground_of(const LabelMap& gt) {
  std::vector<std::uint8_t> fg(gt.size());
  for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = gt.values[i] != 0 && gt.values[i] != kDefaultIgnoreLabel;
  return fg;
}

Tensor map_tensor(const AttentionMap& map) {
  return Tensor(Shape{map.height, map.width}, map.values);
}

AttentionMap load_attention_tensor(const fs::path& path) {
  const Tensor t = load_tensor(path);
  std::size_t h = 0, w = 0;
  if (t.rank() == 2) {
    h = t.dim(0), w = t.dim(1);
  } else if (t.rank() == 3 && t.dim(0) == 1) {
    h = t.dim(1), w = t.dim(2);
  } else {
    throw IoError(path.string() + ": expected an [H,W] attention tensor, got " + shape_str(t.shape()));
  }
  const std::vector<float> values(t.data().begin(), t.data().end());
  return normalize_map(AttentionMap(h, w, values));
}

void write_mask_png(const fs::path& path, const MaskMap& mask) {
  std::vector<std::uint8_t> gray(mask.values.size());
  std::transform(mask.values.begin(), mask.values.end(), gray.begin(),
                 [](signed char v) { return static_cast<std::uint8_t>(v < 0 ? 0 : v == 0 ? 128 : 255); });
  write_png_gray(path, mask.height, mask.width, gray);
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> read_label_manifest(const fs::path& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw IoError(path.string() + ": expected an object {image_id: [class ids]}");
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  try {
    for (const auto& [id, classes] : j.items()) out.emplace_back(id, classes.get<std::vector<std::size_t>>());
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return out;
}

fs::path find_saliency(const fs::path& dir, const std::string& id) {
  for (const char* ext : {".png", ".setn"}) {
    const fs::path p = dir / (id + ext);
    if (fs::exists(p)) return p;
  }
  throw IoError("no saliency map for " + id + " in " + dir.string());
}

// ---- gen-data ---------------------------------------------------------

struct GenDataArgs {
  SynthConfig synth;
  fs::path out;
};

int cmd_gen_data(const GenDataArgs& a, std::ostream& out) {
  a.synth.validate();
  const json manifest = gen_dataset(a.synth, a.out);
  JsonLog log(a.out / "gen_data_log.jsonl", &out);
  std::map<std::size_t, std::size_t> per_class;
  for (const auto& s : manifest.at("samples")) {
    for (std::size_t c : s.at("labels").get<std::vector<std::size_t>>()) ++per_class[c];
  }
  json counts = json::object();
  for (const auto& [c, n] : per_class) counts[std::to_string(c)] = n;
  log({{"event", "gen_data"},
       {"samples", a.synth.n},
       {"num_classes", a.synth.num_classes},
       {"image_side", a.synth.image_side},
       {"seed", a.synth.seed},
       {"class_counts", counts}});
  return 0;
}

// ---- train ------------------------------------------------------------

struct TrainArgs {
  fs::path data, out;
  TrainConfig train;
  ModelConfig model;
  std::string strategy = "seenet";
  bool no_flip = false;
  bool quiet = false;
};

int cmd_train(TrainArgs a, std::ostream& out) {
  a.model.strategy = parse_strategy(a.strategy);
  a.train.flip_augment = !a.no_flip;
  a.train.diagnostic_dir = a.out / "diagnostics";
  a.train.validate();
  const Dataset data = load_dataset(a.data);
  a.model.num_classes = data.num_classes;
  try {
    a.model.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("--backbone-channels/--backbone-strides/--branch-*: ") + e.what());
  }
  make_dirs(a.out);

  SeeNet model(a.model, derive_seed(a.train.seed, 0x30de1));
  json config{{"model", a.model}, {"train", a.train}, {"data", a.data.string()}, {"samples", data.samples.size()}};
  write_json_file(a.out / "train_config.json", config);

  JsonLog log(a.out / "train_log.jsonl", a.quiet ? nullptr : &out);
  log({{"event", "start"}, {"config", config}});
  const TrainLog result = train(model, data, a.train, [&](const json& line) { log(line); });
  save_checkpoint(a.out / "checkpoint.seck", model, a.train.iters, a.train.seed);
  json done{{"event", "done"}, {"iterations", result.iterations.size()}, {"checkpoint", "checkpoint.seck"}};
  if (!result.iterations.empty()) done["final_loss"] = result.iterations.back().loss;
  log(done);
  return 0;
}

// ---- attend -----------------------------------------------------------

struct AttendArgs {
  fs::path checkpoint, data, out;
  std::size_t input_side = kDefaultInputSide;
  double tau = 0.5;
  std::size_t limit = 0;
  bool dump_masks = false;
};

int cmd_attend(const AttendArgs& a, std::ostream& out) {
  if (!(a.tau > 0.0 && a.tau < 1.0)) throw ConfigError("--tau must lie in (0, 1)");
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  const SeeNet& model = ck.model;
  const Dataset data = load_dataset(a.data);
  const std::size_t m = model.config().num_classes;
  if (data.num_classes != m) {
    throw ContractViolation("dataset has " + std::to_string(data.num_classes) + " classes, checkpoint has " +
                            std::to_string(m));
  }
  make_dirs(a.out / "attention");
  make_dirs(a.out / "fused");
  JsonLog log(a.out / "attend_log.jsonl", &out);

  const std::size_t n = a.limit == 0 ? data.samples.size() : std::min(a.limit, data.samples.size());
  json labels = json::object();
  AttentionQualityMeter meter(a.tau);
  for (std::size_t i = 0; i < n; ++i) {
    const SampleRecord& s = data.samples[i];
    const LabelSet channels = channels_for(s.classes, m);
    const fs::path dir = a.out / "attention" / s.id;
    make_dirs(dir);
    for (std::size_t c : s.classes) {
      const AttentionMap map = infer_attention(model, s.image, channels_for({c}, m), a.input_side);
      save_tensor(dir / (std::to_string(c) + ".setn"), map_tensor(map));
      write_attention_png(dir / (std::to_string(c) + ".png"), map);
    }
    const AttentionMap fused = infer_attention(model, s.image, channels, a.input_side);
    write_attention_png(a.out / "fused" / (s.id + ".png"), fused);
    labels[s.id] = s.classes;

    json line{{"event", "attend"}, {"id", s.id}, {"labels", s.classes}};
    const auto fg = foreground_of(s.gt);
    if (s.gt.size() == fused.values.size() && std::any_of(fg.begin(), fg.end(), [](auto v) { return v != 0; })) {
      const auto scored = meter.add(fused, fg);
      line["attention_iou"] = scored.score.iou;
      line["precision"] = scored.score.precision;
      line["recall"] = scored.score.recall;
      line["leakage"] = scored.leakage ? json(*scored.leakage) : json(nullptr);
    }
    if (a.dump_masks) {
      const fs::path mdir = a.out / "masks" / s.id;
      make_dirs(mdir);
      NoGradGuard no_grad;
      const auto fwd = model.forward(resize_bilinear(s.image, a.input_side, a.input_side), channels);
      write_mask_png(mdir / "ternary.png", fwd.ternary.as_mask());
      write_mask_png(mdir / "mask_b.png", fwd.mask_b);
      write_mask_png(mdir / "mask_c.png", fwd.mask_c);
    }
    log(line);
  }
  write_json_file(a.out / "labels.json", labels);
  json metrics = to_json(meter.result());
  metrics["tau"] = a.tau;
  metrics["input_side"] = a.input_side;
  write_json_file(a.out / "metrics.json", metrics);
  metrics["event"] = "summary";
  log(metrics);
  return 0;
}

// ---- proxy-gt ---------------------------------------------------------

struct ProxyArgs {
  fs::path saliency, attention, labels, out;
  double w = 1.0;
  bool dump_q = false;
};

int cmd_proxy_gt(const ProxyArgs& a, std::ostream& out) {
  if (!(a.w > 0.0)) throw ConfigError("--w must be positive");
  const auto entries = read_label_manifest(a.labels);
  make_dirs(a.out);
  JsonLog log(a.out / "proxy_gt_log.jsonl", &out);
  for (const auto& [id, classes] : entries) {
    const SaliencyMap saliency = load_saliency(find_saliency(a.saliency, id));
    std::map<std::size_t, AttentionMap> maps;
    for (std::size_t c : classes) {
      const fs::path p = a.attention / id / (std::to_string(c) + ".setn");
      if (!fs::exists(p)) throw IoError("missing attention map " + p.string());
      maps.emplace(c, load_attention_tensor(p));
    }
    ProxyScores scores;
    const LabelMap g = generate_proxy_gt(saliency, maps, classes, a.w, a.dump_q ? &scores : nullptr);
    write_png_indexed(a.out / (id + ".png"), g);
    {
      std::ofstream raw(a.out / (id + ".u8"), std::ios::binary);
      if (!raw) throw IoError("cannot write " + (a.out / (id + ".u8")).string());
      raw.write(reinterpret_cast<const char*>(g.values.data()), static_cast<std::streamsize>(g.values.size()));
    }
    json line{{"event", "proxy_gt"}, {"id", id}, {"height", g.height}, {"width", g.width}};
    json counts = json::object();
    for (std::uint8_t v : g.values) counts[std::to_string(v)] = counts.value(std::to_string(v), 0) + 1;
    line["label_pixels"] = counts;
    if (a.dump_q) {
      save_tensor(a.out / (id + ".q.setn"), Tensor(Shape{scores.rows.size(), g.height, g.width}, scores.q));
      line["q_rows"] = scores.rows;
    }
    log(line);
  }
  return 0;
}

// ---- eval -------------------------------------------------------------

struct EvalArgs {
  fs::path pred, gt;
  std::size_t classes = 0;
  int ignore = kDefaultIgnoreLabel;
  std::optional<fs::path> out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (!fs::is_directory(a.pred)) throw IoError("prediction directory " + a.pred.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(a.pred)) {
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .png predictions in " + a.pred.string());
  ConfusionMatrix cm(a.classes);
  const std::optional<std::uint8_t> ignore =
      a.ignore < 0 ? std::nullopt : std::optional<std::uint8_t>(static_cast<std::uint8_t>(a.ignore));
  for (const auto& p : files) {
    const fs::path g = a.gt / p.filename();
    if (!fs::exists(g)) throw IoError("missing ground truth " + g.string());
    try {
      confusion_accumulate(load_label_png(p), load_label_png(g), cm, ignore);
    } catch (const ContractViolation& e) {
      throw ContractViolation(p.filename().string() + ": " + e.what());
    }
  }
  const IouReport r = miou(cm);
  json per_class = json::array();
  for (const auto& v : r.per_class) per_class.push_back(v ? json(*v) : json(nullptr));
  const json report{{"per_class_iou", per_class}, {"miou", r.mean}, {"pixels", cm.total()}, {"images", files.size()}};
  if (a.out) {
    if (a.out->has_parent_path()) make_dirs(a.out->parent_path());
    write_json_file(*a.out, report);
  }
  out << report.dump() << "\n";
  return 0;
}

// ---- gradcheck --------------------------------------------------------

struct GradcheckArgs {
  std::uint64_t seed = 1;
  std::size_t seeds = 1;
  double eps = 1e-5;
  double tol = 1e-3;
  bool verbose = false;
  std::optional<fs::path> out;
};

int cmd_gradcheck(const GradcheckArgs& a, std::ostream& out) {
  std::optional<JsonLog> file;
  if (a.out) {
    if (a.out->has_parent_path()) make_dirs(a.out->parent_path());
    file.emplace(*a.out, nullptr);
  }
  auto emit = [&](const json& line) {
    out << line.dump() << "\n";
    if (file) (*file)(line);
  };
  double worst = 0.0;
  std::size_t checked = 0, skipped = 0;
  for (std::size_t k = 0; k < a.seeds; ++k) {
    const std::uint64_t seed = a.seed + k;
    const GradCheckReport r = run_gradcheck_suite(seed, a.eps);
    worst = std::max(worst, r.max_rel_error);
    checked += r.checked;
    skipped += r.skipped;
    if (a.verbose) {
      for (const auto& e : r.entries) {
        emit({{"event", "check"},
              {"seed", seed},
              {"name", e.name},
              {"max_rel_error", e.result.max_rel_error},
              {"checked", e.result.checked},
              {"skipped", e.result.skipped}});
      }
    }
  }
  const bool pass = worst <= a.tol;
  emit({{"event", "gradcheck"},
        {"seed", a.seed},
        {"seeds", a.seeds},
        {"max_rel_error", worst},
        {"tolerance", a.tol},
        {"checked", checked},
        {"skipped", skipped},
        {"pass", pass}});
  return pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-erasing attention network: data, training, attention, proxy labels, evaluation"};
  app.name("seenet");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset with pixel ground truth");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--n", gen.synth.n, "Number of samples")->capture_default_str()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--classes", gen.synth.num_classes, "Number of object classes")
      ->capture_default_str()
      ->check(CLI::Range(2, 20));
  gen_cmd->add_option("--side", gen.synth.image_side, "Image side in pixels")
      ->capture_default_str()
      ->check(CLI::Range(32, 4096));
  gen_cmd->add_option("--seed", gen.synth.seed, "Dataset seed")->capture_default_str();
  gen_cmd->add_option("--saliency-noise", gen.synth.saliency_noise, "Uniform saliency noise amplitude")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.5));
  gen_cmd->add_option("--distractor-prob", gen.synth.distractor_prob, "Chance of a class-correlated distractor")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--large-object-prob", gen.synth.large_object_prob, "Chance an object is large")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a model on a generated dataset");
  train_cmd->add_option("--data", tr.data, "Dataset directory (with manifest.json)")->required();
  train_cmd->add_option("--out", tr.out, "Output directory for logs and checkpoint")->required();
  train_cmd->add_option("--iters", tr.train.iters, "Training iterations")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", tr.train.lr, "Learning rate")->capture_default_str()->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr-drop-at", tr.train.lr_drop_at, "Iteration at which lr is divided")
      ->capture_default_str();
  train_cmd->add_option("--lr-drop-factor", tr.train.lr_drop_factor, "Multiplier applied at --lr-drop-at")
      ->capture_default_str()
      ->check(CLI::Range(1e-12, 1.0));
  train_cmd->add_option("--batch", tr.train.batch, "Images per iteration")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--delta-h", tr.model.k_h, "High threshold factor (attention zone)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--delta-l", tr.model.k_l, "Low threshold factor (background zone)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--warmup", tr.train.warmup, "Iterations with erasing disabled")->capture_default_str();
  train_cmd->add_option("--strategy", tr.strategy, "Mask post-processing: acol, zeroing or seenet")
      ->capture_default_str()
      ->check(CLI::IsMember({"acol", "zeroing", "seenet"}));
  train_cmd->add_option("--seed", tr.train.seed, "Seed for initialization and batch order")->capture_default_str();
  train_cmd->add_option("--momentum", tr.train.momentum, "SGD momentum")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 0.999999));
  train_cmd->add_option("--weight-decay", tr.train.weight_decay, "L2 weight decay")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--backbone-channels", tr.model.backbone_channels, "Backbone conv widths")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--backbone-strides", tr.model.backbone_strides, "Backbone conv strides")
      ->delimiter(',')
      ->capture_default_str();
  train_cmd->add_option("--branch-channels", tr.model.branch_channels, "Branch conv width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--branch-depth", tr.model.branch_depth, "3x3 convs per branch")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--metric-every", tr.train.metric_every, "Attention-quality metrics every N iterations")
      ->capture_default_str();
  train_cmd->add_option("--metric-samples", tr.train.metric_samples, "Training samples used for those metrics")
      ->capture_default_str();
  train_cmd->add_flag("--no-flip", tr.no_flip, "Disable random horizontal flips");
  train_cmd->add_flag("--quiet", tr.quiet, "Do not echo log lines to stdout");

  AttendArgs at;
  auto* attend_cmd = app.add_subcommand("attend", "Export per-class and fused attention maps");
  attend_cmd->add_option("--checkpoint", at.checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  attend_cmd->add_option("--data", at.data, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  attend_cmd->add_option("--out", at.out, "Output directory")->required();
  attend_cmd->add_option("--input-side", at.input_side, "Network input side")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  attend_cmd->add_option("--tau", at.tau, "Binarization factor for localization metrics")->capture_default_str();
  attend_cmd->add_option("--limit", at.limit, "Process only the first N samples (0 = all)")->capture_default_str();
  attend_cmd->add_flag("--dump-masks", at.dump_masks, "Write ternary, branch B and branch C masks");

  ProxyArgs px;
  auto* proxy_cmd = app.add_subcommand("proxy-gt", "Combine saliency and attention into proxy labels");
  proxy_cmd->add_option("--saliency", px.saliency, "Saliency directory (<id>.png or <id>.setn)")
      ->required()
      ->check(CLI::ExistingDirectory);
  proxy_cmd->add_option("--attention", px.attention, "Attention directory (<id>/<class>.setn)")
      ->required()
      ->check(CLI::ExistingDirectory);
  proxy_cmd->add_option("--labels", px.labels, "JSON {image_id: [class ids]}")->required()->check(CLI::ExistingFile);
  proxy_cmd->add_option("--out", px.out, "Output directory")->required();
  proxy_cmd->add_option("--w", px.w, "Harmonic-mean weight")->capture_default_str();
  proxy_cmd->add_flag("--dump-q", px.dump_q, "Also write the per-pixel score rows");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Confusion matrix and mIoU of label maps");
  eval_cmd->add_option("--pred", ev.pred, "Predicted label PNG directory")->required();
  eval_cmd->add_option("--gt", ev.gt, "Ground-truth label PNG directory")->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--classes", ev.classes, "Number of object classes M")->required()->check(CLI::Range(1, 254));
  eval_cmd->add_option("--ignore", ev.ignore, "Ignored label (-1 = none)")->capture_default_str()->check(
      CLI::Range(-1, 255));
  eval_cmd->add_option("--out", ev.out, "Write the JSON report here as well");

  GradcheckArgs gc;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient self-check");
  grad_cmd->add_option("--seed", gc.seed, "First seed")->capture_default_str();
  grad_cmd->add_option("--seeds", gc.seeds, "Number of consecutive seeds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  grad_cmd->add_option("--eps", gc.eps, "Central-difference step")->capture_default_str()->check(
      CLI::PositiveNumber);
  grad_cmd->add_option("--tol", gc.tol, "Maximum relative error")->capture_default_str()->check(
      CLI::PositiveNumber);
  grad_cmd->add_flag("--verbose", gc.verbose, "One line per checked tensor");
  grad_cmd->add_option("--out", gc.out, "Also write the log to this file");

  std::vector<std::string> argv_storage{"seenet"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  retain_heap_memory();
  try {
    if (train_cmd->parsed() && !(tr.model.k_l < tr.model.k_h)) {
      throw ConfigError("--delta-l must be smaller than --delta-h");
    }
    if (gen_cmd->parsed()) return cmd_gen_data(gen, out);
    if (train_cmd->parsed()) return cmd_train(tr, out);
    if (attend_cmd->parsed()) return cmd_attend(at, out);
    if (proxy_cmd->parsed()) return cmd_proxy_gt(px, out);
    if (eval_cmd->parsed()) return cmd_eval(ev, out);
    if (grad_cmd->parsed()) return cmd_gradcheck(gc, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace seenet
