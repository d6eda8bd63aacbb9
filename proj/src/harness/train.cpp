#include "deocc/harness/train.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "deocc/core/errors.hpp"
#include "deocc/core/log.hpp"
#include "deocc/core/rng.hpp"
#include "deocc/evalkit/cascade.hpp"
#include "deocc/maskcomp/stage_one_loss.hpp"
#include "deocc/nn/convert.hpp"
#include "deocc/recovery/stage_two_loss.hpp"

namespace deocc::harness {

namespace {

constexpr std::uint64_t kScheduleStream = 31;

double value(const torch::Tensor& t) { return t.item<double>(); }

void report(const TrainConfig& config, const char* stage, const LossRecord& r) {
  if (r.iteration % config.log_every != 0 && r.iteration != config.iterations) return;
  std::ostringstream os;
  os << stage << " iter " << r.iteration;
  for (const auto& [k, v] : r.terms) os << ' ' << k << '=' << v;
  log::info(os.str());
}

void require_data(std::span<const datagen::OcclusionSample> data, const TrainConfig& config) {
  if (data.empty()) throw ValidationError("training set is empty");
  for (const auto& s : data) {
    if (s.part_count() != config.part_count) throw ValidationError("dataset part_count differs from config");
  }
}

}  // namespace

BatchSchedule::BatchSchedule(std::size_t dataset_size, int batch_size, std::uint64_t seed)
    : size_(dataset_size), batch_(static_cast<std::size_t>(batch_size)), seed_(seed) {
  if (size_ == 0 || batch_size < 1) throw ValidationError("batch schedule needs data and batch_size >= 1");
  order_.resize(size_);
  reshuffle();
}

void BatchSchedule::reshuffle() {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  Rng rng(derive_seed(seed_, {kScheduleStream, epoch_}));
  std::shuffle(order_.begin(), order_.end(), rng);
  cursor_ = 0;
  ++epoch_;
}

std::vector<std::size_t> BatchSchedule::next() {
  if (size_ <= batch_) {
    std::vector<std::size_t> all(size_);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  if (cursor_ + batch_ > size_) reshuffle();
  std::vector<std::size_t> out(order_.begin() + cursor_, order_.begin() + cursor_ + batch_);
  cursor_ += batch_;
  return out;
}

TrainResult train_stage_one(StageOneModels& models, std::span<const datagen::OcclusionSample> data,
                            const TrainConfig& config, const losses::FeatureEmbedding& embedding,
                            const StepCallback& on_step) {
  config.validate();
  require_data(data, config);
  auto& net = models.net;
  auto& disc = models.disc;
  net->train();
  disc->train();
  torch::optim::SGD opt_g(net->parameters(), torch::optim::SGDOptions(config.mask_lr).momentum(config.mask_momentum));
  torch::optim::SGD opt_d(disc->parameters(), torch::optim::SGDOptions(config.mask_lr).momentum(config.mask_momentum));
  const auto weights = config.stage1_weights();
  BatchSchedule schedule(data.size(), config.batch_size, config.seed);

  TrainResult result;
  for (int it = 1; it <= config.iterations; ++it) {
    const auto batch = nn::make_batch(data, schedule.next());
    const maskcomp::Stage1Targets targets{batch.modal, batch.amodal, batch.modal_parsing, batch.amodal_parsing};
    const auto out = net->forward(batch.occluded, batch.initial);

    opt_d.zero_grad();
    const auto d_pair = losses::adversarial_pair(disc->probability(batch.amodal),
                                                 disc->probability(out.amodal.amodal.detach()));
    d_pair.discriminator.backward();
    opt_d.step();

    opt_g.zero_grad();
    const auto d_real = disc->probability(batch.amodal).detach();
    const auto d_fake = disc->probability(out.amodal.amodal);
    const auto terms = maskcomp::stage_one_loss(out, targets, d_real, d_fake, embedding, weights, config.objective());
    terms.total.backward();
    opt_g.step();

    LossRecord r;
    r.iteration = it;
    r.terms = {{"total", value(terms.total)},
               {"seg", value(terms.seg)},
               {"adv", value(terms.adv)},
               {"gen", value(terms.gen)},
               {"ce_modal", value(terms.ce_modal)},
               {"ce_amodal", value(terms.ce_amodal)},
               {"ce_modal_parsing", value(terms.ce_modal_parsing)},
               {"ce_amodal_parsing", value(terms.ce_amodal_parsing)},
               {"l1", value(terms.l1)},
               {"perceptual", value(terms.perceptual)},
               {"disc", value(d_pair.discriminator)}};
    report(config, "stage1", r);
    result.log.push_back(r);
    result.iterations_run = it;
    if (on_step && !on_step(r)) break;
  }
  return result;
}

TrainResult train_stage_two(StageTwoModels& models, std::span<const datagen::OcclusionSample> data,
                            const TrainConfig& config, const losses::FeatureEmbedding& embedding,
                            StageOneModels* predictor, const StepCallback& on_step) {
  config.validate();
  require_data(data, config);
  auto& net = models.net;
  auto& disc = models.disc;
  net->train();
  disc->train();
  const auto adam = torch::optim::AdamOptions(config.recover_lr).betas({config.adam_beta1, config.adam_beta2});
  torch::optim::Adam opt_g(net->parameters(), adam);
  torch::optim::Adam opt_d(disc->parameters(), adam);
  const auto weights = config.stage2_weights();
  BatchSchedule schedule(data.size(), config.batch_size, config.seed);

  TrainResult result;
  for (int it = 1; it <= config.iterations; ++it) {
    const auto batch = nn::make_batch(data, schedule.next());
    torch::Tensor visible = batch.modal;
    torch::Tensor amodal = batch.amodal;
    torch::Tensor modal_parsing = batch.modal_parsing;
    torch::Tensor amodal_parsing = batch.amodal_parsing;
    if (predictor != nullptr) {
      const auto c = evalkit::run_cascade(predictor->net, nullptr, batch.occluded, batch.initial);
      visible = c.modal;
      amodal = c.amodal;
      modal_parsing = c.modal_parsing;
      amodal_parsing = c.amodal_parsing;
    }
    const auto recovered = net->forward(batch.occluded, visible, amodal, modal_parsing, amodal_parsing);

    opt_d.zero_grad();
    const auto d_pair =
        losses::adversarial_pair(disc->probability(batch.full), disc->probability(recovered.detach()));
    d_pair.discriminator.backward();
    opt_d.step();

    opt_g.zero_grad();
    const auto d_real = disc->probability(batch.full).detach();
    const auto d_fake = disc->probability(recovered);
    const auto terms =
        recovery::stage_two_loss(recovered, batch.full, d_real, d_fake, embedding, weights, config.objective());
    terms.total.backward();
    opt_g.step();

    LossRecord r;
    r.iteration = it;
    r.terms = {{"total", value(terms.total)},
               {"adv", value(terms.adv)},
               {"l1", value(terms.l1)},
               {"perceptual", value(terms.perceptual)},
               {"style", value(terms.style)},
               {"disc", value(d_pair.discriminator)}};
    report(config, "stage2", r);
    result.log.push_back(r);
    result.iterations_run = it;
    if (on_step && !on_step(r)) break;
  }
  return result;
}

void write_loss_log(const std::filesystem::path& path, const std::vector<LossRecord>& log) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write loss log " + path.string());
  for (const auto& r : log) {
    nlohmann::json j = r.terms;
    j["iteration"] = r.iteration;
    out << j.dump() << '\n';
  }
}

void configure_runtime(int threads) {
  torch::set_num_threads(std::max(1, threads));
  at::globalContext().setDeterministicAlgorithms(true, false);
}

}  // namespace deocc::harness
