// Command-line front end: synth | train-mask | train-recover | eval | infer | ablate.

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>

#include "deocc/core/errors.hpp"
#include "deocc/core/log.hpp"
#include "deocc/harness/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kFailure = 2 };

// Long flag with a hyphenated and an underscored spelling; config files
// use the underscored key.
std::string flag(const std::string& key) {
  std::string hyphen = key;
  for (auto& c : hyphen) {
    if (c == '_') c = '-';
  }
  return hyphen == key ? "--" + key : "--" + hyphen + ",--" + key;
}

void bind_config(CLI::App& app, deocc::harness::TrainConfig& c) {
  app.add_option(flag("data_dir"), c.data_dir, "training dataset directory")->capture_default_str();
  app.add_option(flag("eval_dir"), c.eval_dir, "evaluation dataset directory")->capture_default_str();
  app.add_option(flag("run_dir"), c.run_dir, "output directory (default $DEOCC_RUN_DIR, then runs)");
  app.add_option(flag("mask_checkpoint"), c.mask_checkpoint, "stage-1 checkpoint (default <run_dir>/stage1.ckpt)");
  app.add_option(flag("recover_checkpoint"), c.recover_checkpoint,
                 "stage-2 checkpoint (default <run_dir>/stage2.ckpt)");
  app.add_option(flag("canvas"), c.canvas, "square canvas side")->capture_default_str();
  app.add_option(flag("part_count"), c.part_count, "parsing classes including background")->capture_default_str();
  app.add_option(flag("seed"), c.seed, "master seed")->capture_default_str();
  app.add_option(flag("threads"), c.threads, "libtorch intra-op threads")->capture_default_str();

  app.add_option(flag("lambda_seg"), c.lambda_seg)->capture_default_str();
  app.add_option(flag("lambda_adv"), c.lambda_adv)->capture_default_str();
  app.add_option(flag("lambda_gen"), c.lambda_gen)->capture_default_str();
  app.add_option(flag("mask_lr"), c.mask_lr)->capture_default_str();
  app.add_option(flag("mask_momentum"), c.mask_momentum)->capture_default_str();
  app.add_option(flag("hourglass_base"), c.hourglass_base)->capture_default_str();
  app.add_option(flag("hourglass_depth"), c.hourglass_depth)->capture_default_str();
  app.add_option(flag("template_k"), c.template_k)->capture_default_str();
  app.add_option(flag("template_resolution"), c.template_resolution)->capture_default_str();

  app.add_option(flag("beta_adv"), c.beta_adv)->capture_default_str();
  app.add_option(flag("beta_l1"), c.beta_l1)->capture_default_str();
  app.add_option(flag("beta_perceptual"), c.beta_perceptual)->capture_default_str();
  app.add_option(flag("beta_style"), c.beta_style)->capture_default_str();
  app.add_option(flag("recover_lr"), c.recover_lr)->capture_default_str();
  app.add_option(flag("adam_beta1"), c.adam_beta1)->capture_default_str();
  app.add_option(flag("adam_beta2"), c.adam_beta2)->capture_default_str();
  app.add_option(flag("recover_base"), c.recover_base)->capture_default_str();
  app.add_option(flag("pga_scales"), c.pga_scales)->capture_default_str();
  app.add_option(flag("assembly"), c.assembly, "fusion or cascade")->capture_default_str();
  app.add_option(flag("body_stream"), c.body_stream)->capture_default_str();
  app.add_option(flag("relation_stream"), c.relation_stream)->capture_default_str();
  app.add_option(flag("background_w"), c.background_w)->capture_default_str();
  app.add_option(flag("train_on_predictions"), c.train_on_predictions)->capture_default_str();

  app.add_option(flag("disc_base"), c.disc_base)->capture_default_str();
  app.add_option(flag("generator_objective"), c.generator_objective, "nonsaturating or minimax")
      ->capture_default_str();
  app.add_option(flag("batch_size"), c.batch_size)->capture_default_str();
  app.add_option(flag("iterations"), c.iterations)->capture_default_str();
  app.add_option(flag("log_every"), c.log_every)->capture_default_str();
  app.add_option(flag("embedding_seed"), c.embedding_seed)->capture_default_str();
  app.add_option(flag("composite"), c.composite, "also score the visible-region composite")->capture_default_str();
  app.add_option(flag("grid_samples"), c.grid_samples, "rows in the qualitative grid")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace deocc;
  CLI::App app{"Two-stage human de-occlusion: synthesis, training, evaluation and inference"};
  app.set_config("--config", "", "flat key = value configuration file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  harness::TrainConfig config;
  bind_config(app, config);
  std::string level = "info";
  app.add_option("--log-level,--log_level", level, "debug|info|warn|error|off")->capture_default_str();

  harness::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic occlusion dataset");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->capture_default_str();
  synth_cmd->add_option("--humans", synth.humans)->capture_default_str();
  synth_cmd->add_option("--occluders-per-human", synth.occluders_per_human)->capture_default_str();
  synth_cmd->add_option("--split", synth.split, "train|val|test")->capture_default_str();
  synth_cmd->add_option("--ratios", synth.ratios, "train|val ratio bins")->capture_default_str();
  synth_cmd->add_option("--severity", synth.severity, "initial-mask corruption in [0,1]")->capture_default_str();
  synth_cmd->add_flag("--validation-protocol", synth.validation_protocol, "297 humans x 3 occluders, val bins");

  auto* mask_cmd = app.add_subcommand("train-mask", "train the mask-completion stage");
  auto* recover_cmd = app.add_subcommand("train-recover", "train the appearance-recovery stage");
  auto* eval_cmd = app.add_subcommand("eval", "score the cascade on eval_dir");

  harness::InferRequest infer;
  auto* infer_cmd = app.add_subcommand("infer", "run the full cascade on one input");
  std::string sample_dir, image, mask;
  infer_cmd->add_option("--sample", sample_dir, "saved sample directory");
  infer_cmd->add_option("--image", image, "RGB PNG");
  infer_cmd->add_option("--mask", mask, "initial mask PNG (0/255)");
  infer_cmd->add_option("--out", infer.out_dir, "output directory")->capture_default_str();

  auto* ablate_cmd = app.add_subcommand("ablate", "background-proportion and PGA ablations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    log::set_level(log::parse_level(level));
    synth.seed = config.seed;
    synth.canvas = config.canvas;
    synth.part_count = config.part_count;
    if (!sample_dir.empty()) infer.sample_dir = sample_dir;
    if (!image.empty()) infer.image = image;
    if (!mask.empty()) infer.mask = mask;

    if (synth_cmd->parsed()) {
      harness::cmd_synth(synth);
    } else if (mask_cmd->parsed()) {
      harness::cmd_train_mask(config);
    } else if (recover_cmd->parsed()) {
      harness::cmd_train_recover(config);
    } else if (eval_cmd->parsed()) {
      harness::cmd_eval(config);
    } else if (infer_cmd->parsed()) {
      harness::cmd_infer(config, infer);
    } else if (ablate_cmd->parsed()) {
      harness::cmd_ablate(config);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
