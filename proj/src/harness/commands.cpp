#include "deocc/harness/commands.hpp"

#include <cmath>
#include <fstream>

#include "deocc/core/errors.hpp"
#include "deocc/core/log.hpp"
#include "deocc/core/png_io.hpp"
#include "deocc/core/rng.hpp"
#include "deocc/datagen/dataset.hpp"
#include "deocc/datagen/ingest.hpp"
#include "deocc/datagen/synthesis.hpp"
#include "deocc/evalkit/evaluate.hpp"
#include "deocc/maskcomp/template_bank.hpp"
#include "deocc/nn/convert.hpp"
#include "deocc/recovery/compositing.hpp"

namespace deocc::harness {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTemplateStream = 41;

void write_json(const fs::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void write_histogram_png(const fs::path& path, const std::vector<std::size_t>& counts,
                         const datagen::RatioDistribution& dist, std::size_t total) {
  constexpr int kBarWidth = 16;
  constexpr int kHeight = 120;
  const int bars = static_cast<int>(counts.size());
  ImageTensor img(Size2{kHeight, bars * kBarWidth}, 1.0f);
  for (int b = 0; b < bars; ++b) {
    const double frac = total ? static_cast<double>(counts[b]) / static_cast<double>(total) : 0.0;
    const int h = static_cast<int>(std::lround(frac * (kHeight - 1)));
    for (int y = kHeight - h; y < kHeight; ++y) {
      for (int x = b * kBarWidth + 2; x < (b + 1) * kBarWidth - 2; ++x) {
        img.at(0, y, x) = 0.2f;
        img.at(1, y, x) = 0.4f;
        img.at(2, y, x) = 0.8f;
      }
    }
  }
  for (const auto& bin : dist.bins) {
    const int y = kHeight - 1 - static_cast<int>(std::lround(bin.probability * (kHeight - 1)));
    const int x0 = static_cast<int>(std::lround(bin.low * 10)) * kBarWidth;
    const int x1 = static_cast<int>(std::lround(bin.high * 10)) * kBarWidth;
    for (int x = x0; x < x1 && x < img.size().width; ++x) {
      img.at(0, y, x) = 0.9f;
      img.at(1, y, x) = 0.1f;
      img.at(2, y, x) = 0.1f;
    }
  }
  png::write_rgb(path, img);
}

std::vector<datagen::OcclusionSample> load_split(const std::string& dir, const TrainConfig& config) {
  auto samples = datagen::load_dataset(dir);
  if (samples.empty()) throw ValidationError("dataset " + dir + " is empty");
  for (const auto& s : samples) {
    if (s.part_count() != config.part_count) {
      throw ValidationError("dataset " + dir + " has part_count " + std::to_string(s.part_count()) +
                            ", config says " + std::to_string(config.part_count));
    }
  }
  return samples;
}

losses::FeatureEmbedding make_embedding(const TrainConfig& config) {
  losses::EmbeddingOptions o;
  o.seed = config.embedding_seed;
  return losses::FeatureEmbedding(o);
}

ImageTensor labels_panel(const ParsingMap& p) {
  ImageTensor img(p.size());
  for (int y = 0; y < p.size().height; ++y) {
    for (int x = 0; x < p.size().width; ++x) {
      const int l = p.at(y, x);
      if (l == 0) continue;
      const auto h = mix64(static_cast<std::uint64_t>(l));
      for (int c = 0; c < 3; ++c) img.at(c, y, x) = 0.25f + 0.75f * static_cast<float>((h >> (8 * c)) & 0xff) / 255.0f;
    }
  }
  return img;
}

}  // namespace

SynthSummary cmd_synth(const SynthOptions& options) {
  datagen::SynthesisConfig cfg;
  if (options.validation_protocol) {
    cfg = datagen::validation_protocol(options.seed, Size2{options.canvas, options.canvas});
  } else {
    cfg.master_seed = options.seed;
    cfg.canvas = Size2{options.canvas, options.canvas};
    cfg.humans = options.humans;
    cfg.occluders_per_human = options.occluders_per_human;
    cfg.split = datagen::parse_split(options.split);
    if (options.ratios == "train") {
      cfg.ratios = datagen::RatioDistribution::training_default();
    } else if (options.ratios == "val") {
      cfg.ratios = datagen::RatioDistribution::validation_default();
    } else {
      throw ValidationError("ratios must be train or val");
    }
  }
  cfg.part_count = options.part_count;
  cfg.corruption_severity = options.severity;
  cfg.validate();

  const auto samples = datagen::synthesize_dataset(cfg);
  datagen::save_dataset(samples, options.out_dir);

  SynthSummary summary;
  summary.count = samples.size();
  summary.distribution = cfg.ratios;
  summary.bin_counts.assign(cfg.ratios.bins.size(), 0);
  std::vector<std::size_t> deciles(10, 0);
  for (const auto& s : samples) {
    if (auto b = cfg.ratios.bin_of(s.occlusion_ratio)) ++summary.bin_counts[*b];
    ++deciles[std::min<std::size_t>(9, static_cast<std::size_t>(s.occlusion_ratio * 10))];
  }
  nlohmann::json hist;
  hist["count"] = summary.count;
  hist["deciles"] = deciles;
  auto bins = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.ratios.bins.size(); ++i) {
    const auto& b = cfg.ratios.bins[i];
    bins.push_back({{"low", b.low},
                    {"high", b.high},
                    {"target", b.probability},
                    {"count", summary.bin_counts[i]},
                    {"fraction", static_cast<double>(summary.bin_counts[i]) / static_cast<double>(summary.count)}});
  }
  hist["bins"] = bins;
  write_json(options.out_dir / "ratio_histogram.json", hist);
  write_histogram_png(options.out_dir / "ratio_histogram.png", deciles, cfg.ratios, summary.count);
  log::info("synthesized ", summary.count, " samples into ", options.out_dir.string());
  return summary;
}

TrainOutcome cmd_train_mask(const TrainConfig& config) {
  config.validate();
  configure_runtime(config.threads);
  const auto data = load_split(config.data_dir, config);
  std::vector<BinaryMask> masks;
  masks.reserve(data.size());
  for (const auto& s : data) masks.push_back(s.amodal_mask);
  const auto bank = maskcomp::build_template_bank(masks, config.template_k, derive_seed(config.seed, {kTemplateStream}),
                                                  Size2{config.template_resolution, config.template_resolution});
  auto models = make_stage_one(config, bank);
  const auto embedding = make_embedding(config);
  TrainOutcome out;
  out.result = train_stage_one(models, data, config, embedding);
  out.checkpoint = config.resolved_mask_checkpoint();
  out.loss_log = fs::path(config.resolved_run_dir()) / "stage1_losses.jsonl";
  if (out.checkpoint.has_parent_path()) fs::create_directories(out.checkpoint.parent_path());
  save_stage_one(out.checkpoint, models, config);
  write_loss_log(out.loss_log, out.result.log);
  log::info("stage-1 checkpoint written to ", out.checkpoint.string());
  return out;
}

TrainOutcome cmd_train_recover(const TrainConfig& config) {
  config.validate();
  configure_runtime(config.threads);
  const auto data = load_split(config.data_dir, config);
  auto models = make_stage_two(config);
  const auto embedding = make_embedding(config);
  std::optional<StageOneModels> predictor;
  if (config.train_on_predictions) predictor = load_stage_one(config.resolved_mask_checkpoint());
  TrainOutcome out;
  out.result = train_stage_two(models, data, config, embedding, predictor ? &*predictor : nullptr);
  out.checkpoint = config.resolved_recover_checkpoint();
  out.loss_log = fs::path(config.resolved_run_dir()) / "stage2_losses.jsonl";
  if (out.checkpoint.has_parent_path()) fs::create_directories(out.checkpoint.parent_path());
  save_stage_two(out.checkpoint, models, config);
  write_loss_log(out.loss_log, out.result.log);
  log::info("stage-2 checkpoint written to ", out.checkpoint.string());
  return out;
}

evalkit::MetricReport cmd_eval(const TrainConfig& config) {
  config.validate();
  configure_runtime(config.threads);
  const auto data = load_split(config.eval_dir, config);
  auto stage_one = load_stage_one(config.resolved_mask_checkpoint());
  std::optional<StageTwoModels> stage_two;
  if (fs::exists(config.resolved_recover_checkpoint())) {
    stage_two = load_stage_two(config.resolved_recover_checkpoint());
  } else {
    log::warn("no stage-2 checkpoint at ", config.resolved_recover_checkpoint(), "; reporting mask metrics only");
  }
  const auto embedding = make_embedding(config);
  const fs::path run_dir = config.resolved_run_dir();
  evalkit::EvalOptions options;
  options.batch_size = config.batch_size;
  options.composite = config.composite;
  options.grid_samples = config.grid_samples;
  if (config.grid_samples > 0) options.grid_path = run_dir / "grid.png";
  auto report = evalkit::evaluate(data, stage_one.net, stage_two ? &stage_two->net : nullptr, embedding, options,
                                  config.to_json());
  evalkit::write_report(run_dir / "report.json", report);
  for (const auto& [k, v] : report.aggregate) log::info(k, " = ", v);
  for (const auto& [k, v] : report.set_level) log::info(k, " = ", v);
  return report;
}

InferResult run_inference(StageOneModels& stage_one, StageTwoModels& stage_two, const ImageTensor& occluded,
                          const BinaryMask& initial_mask) {
  occluded.validate();
  initial_mask.validate();
  if (occluded.size().height != initial_mask.size().height || occluded.size().width != initial_mask.size().width) {
    throw ValidationError("image and initial mask differ in size");
  }
  const auto image = nn::to_tensor(occluded).unsqueeze(0);
  const auto mask = nn::to_tensor(initial_mask).unsqueeze(0);
  const auto c = evalkit::run_cascade(stage_one.net, &stage_two.net, image, mask);
  InferResult r;
  r.occluded = occluded;
  r.modal = nn::to_mask(c.modal[0]);
  r.amodal = nn::to_mask(c.amodal[0]);
  r.invisible = nn::to_mask(c.invisible[0]);
  r.modal_parsing = nn::argmax_parsing(c.modal_parsing[0]);
  r.amodal_parsing = nn::argmax_parsing(c.amodal_parsing[0]);
  r.recovered = nn::to_image(c.recovered[0]);
  // Compositing on the stored images keeps the visible region bit-exact.
  r.composited = recovery::composite(r.recovered, occluded, r.modal);
  r.violations = c.violations;
  r.pixels = c.pixels;
  return r;
}

InferResult cmd_infer(const TrainConfig& config, const InferRequest& request) {
  config.validate();
  configure_runtime(config.threads);
  ImageTensor image;
  BinaryMask mask;
  if (request.sample_dir) {
    const auto s = datagen::load_sample(*request.sample_dir);
    image = s.occluded_image;
    mask = s.initial_mask;
  } else if (request.image && request.mask) {
    image = png::read_rgb(*request.image);
    mask = datagen::mask_from_gray(png::read_gray(*request.mask));
  } else {
    throw ValidationError("infer needs --sample, or --image together with --mask");
  }
  auto stage_one = load_stage_one(config.resolved_mask_checkpoint());
  auto stage_two = load_stage_two(config.resolved_recover_checkpoint());
  auto r = run_inference(stage_one, stage_two, image, mask);

  const auto& dir = request.out_dir;
  fs::create_directories(dir);
  png::write_mask(dir / "modal.png", r.modal);
  png::write_mask(dir / "amodal.png", r.amodal);
  png::write_mask(dir / "invisible.png", r.invisible);
  png::write_labels(dir / "modal_parsing.png", r.modal_parsing);
  png::write_labels(dir / "amodal_parsing.png", r.amodal_parsing);
  png::write_rgb(dir / "modal_parsing_vis.png", labels_panel(r.modal_parsing));
  png::write_rgb(dir / "amodal_parsing_vis.png", labels_panel(r.amodal_parsing));
  png::write_rgb(dir / "recovered.png", r.recovered);
  png::write_rgb(dir / "composite.png", r.composited);
  write_json(dir / "summary.json", {{"violations", r.violations},
                                    {"pixels", r.pixels},
                                    {"violation_fraction", static_cast<double>(r.violations) / r.pixels},
                                    {"modal_area", r.modal.count()},
                                    {"amodal_area", r.amodal.count()},
                                    {"invisible_area", r.invisible.count()}});
  log::info("inference outputs written to ", dir.string());
  return r;
}

nlohmann::json cmd_ablate(const TrainConfig& config) {
  config.validate();
  configure_runtime(config.threads);
  const auto train = load_split(config.data_dir, config);
  const auto eval = load_split(config.eval_dir, config);
  auto stage_one = load_stage_one(config.resolved_mask_checkpoint());
  const auto embedding = make_embedding(config);

  struct Variant {
    std::string name;
    TrainConfig cfg;
  };
  std::vector<Variant> variants;
  for (double w : kAblationBackgroundGrid) {
    auto c = config;
    c.background_w = w;
    std::ostringstream name;
    name << "w=" << w;
    variants.push_back({name.str(), c});
  }
  auto add = [&](const std::string& name, auto&& edit) {
    auto c = config;
    edit(c);
    variants.push_back({name, c});
  };
  add("assembly=cascade", [](TrainConfig& c) { c.assembly = "cascade"; });
  add("body stream only", [](TrainConfig& c) { c.relation_stream = false; });
  add("relation stream only", [](TrainConfig& c) { c.body_stream = false; });
  add("no PGA", [](TrainConfig& c) { c.pga_scales = 0; });

  evalkit::EvalOptions options;
  options.batch_size = config.batch_size;
  options.composite = config.composite;
  auto rows = nlohmann::json::array();
  for (const auto& v : variants) {
    log::info("ablation variant ", v.name);
    auto models = make_stage_two(v.cfg);
    train_stage_two(models, train, v.cfg, embedding);
    const auto report = evalkit::evaluate(eval, stage_one.net, &models.net, embedding, options, v.cfg.to_json());
    nlohmann::json row{{"variant", v.name}, {"aggregate", report.aggregate}, {"set_level", report.set_level}};
    rows.push_back(row);
  }
  const fs::path run_dir = config.resolved_run_dir();
  nlohmann::json out{{"iterations", config.iterations}, {"note", evalkit::kFrechetNote}, {"rows", rows}};
  write_json(run_dir / "ablation.json", out);

  std::ofstream md(run_dir / "ablation.md");
  md << "| variant | l1_image | l1_image_invisible | frechet |\n|---|---|---|---|\n";
  for (const auto& r : rows) {
    auto get = [](const nlohmann::json& j, const char* k) {
      return j.contains(k) ? std::to_string(j.at(k).get<double>()) : std::string("-");
    };
    md << "| " << r["variant"].get<std::string>() << " | " << get(r["aggregate"], "l1_image") << " | "
       << get(r["aggregate"], "l1_image_invisible") << " | " << get(r["set_level"], "frechet") << " |\n";
  }
  return out;
}

}  // namespace deocc::harness
