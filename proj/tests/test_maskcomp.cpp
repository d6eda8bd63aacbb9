#include <doctest.h>

#include <cmath>

#include "deocc/core/errors.hpp"
#include "deocc/datagen/human.hpp"
#include "deocc/maskcomp/discriminator.hpp"
#include "deocc/maskcomp/mask_ops.hpp"
#include "deocc/maskcomp/stage_one.hpp"
#include "deocc/maskcomp/stage_one_loss.hpp"
#include "deocc/nn/convert.hpp"
#include "support/torch_support.hpp"

using namespace deocc;
using namespace deocc::maskcomp;

namespace {

std::vector<BinaryMask> human_masks(int n, Size2 size, std::uint64_t seed) {
  std::vector<BinaryMask> masks;
  for (int i = 0; i < n; ++i) masks.push_back(datagen::generate_human(derive_seed(seed, {std::uint64_t(i)}), size).amodal);
  return masks;
}

TemplateBank random_bank(Rng& rng, int k, Size2 res) {
  TemplateBank bank;
  bank.count = k;
  bank.resolution = res;
  for (int i = 0; i < k * res.area(); ++i) bank.templates.push_back(static_cast<float>(uniform(rng, 0.0, 1.0)));
  return bank;
}

StageOneNet small_net(Rng& rng, int k = 3) {
  StageOneNet net(StageOneOptions{4, 4, 2}, random_bank(rng, k, {8, 8}));
  net->to(torch::kFloat64);
  test::randomize_parameters(*net, rng());
  return net;
}

// Per-template l2 distance with nearest resampling written as index loops.
std::vector<double> distance_oracle(const test::Array4& mask, const test::Array4& templates) {
  std::vector<double> d;
  for (int k = 0; k < templates.c; ++k) {
    double s = 0;
    for (int y = 0; y < templates.h; ++y) {
      for (int x = 0; x < templates.w; ++x) {
        const int sy = y * mask.h / templates.h;
        const int sx = x * mask.w / templates.w;
        const double t = mask.at(0, 0, sy, sx) - templates.at(0, k, y, x);
        s += t * t;
      }
    }
    d.push_back(std::sqrt(s));
  }
  return d;
}

}  // namespace

TEST_CASE("k-means examples") {
  const Points line{{0}, {0}, {4}, {4}};
  auto r = kmeans(line, 2, 1);
  std::vector<double> centers{r.centers[0][0], r.centers[1][0]};
  std::sort(centers.begin(), centers.end());
  CHECK(centers == std::vector<double>{0.0, 4.0});
  CHECK(r.objective == 0.0);

  const auto masks = human_masks(12, {32, 32}, 5);
  const auto bank = build_template_bank(masks, 1, 9, {32, 32});
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) {
      double mean = 0;
      for (const auto& m : masks) mean += m.at(y, x);
      CHECK(bank.at(0, y, x) == doctest::Approx(mean / masks.size()).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(build_template_bank(masks, 13, 9, {32, 32}), ValidationError);
  CHECK_NOTHROW(bank.validate());
}

TEST_CASE("k-means matches the Lloyd oracle on synthetic masks") {
  const auto masks = human_masks(50, {32, 32}, 17);
  Points points;
  for (const auto& m : masks) points.emplace_back(m.data().begin(), m.data().end());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto seeds = kmeans_plus_plus_seeds(points, 4, seed);
    const auto got = lloyd(points, seeds);
    const auto want = test::lloyd_oracle(points, seeds, 100, 1e-6);
    CHECK(got.objective == doctest::Approx(want.objective).epsilon(1e-9));
    CHECK(got.assignment == want.assignment);
    CHECK(got.objective_history.size() == want.history.size());
    for (std::size_t i = 1; i < got.objective_history.size(); ++i) {
      CHECK(got.objective_history[i] <= got.objective_history[i - 1] + 1e-9);
    }
    // Final assignment is a fixed point: every point is nearest its own centre.
    for (std::size_t i = 0; i < points.size(); ++i) {
      auto d2 = [&](const std::vector<double>& c) {
        double s = 0;
        for (std::size_t j = 0; j < c.size(); ++j) s += (points[i][j] - c[j]) * (points[i][j] - c[j]);
        return s;
      };
      const double own = d2(got.centers[got.assignment[i]]);
      for (const auto& c : got.centers) CHECK(own <= d2(c) + 1e-9);
    }
  }
}

TEST_CASE("k-means++ seeds are data points and deterministic") {
  Rng rng(4);
  Points points;
  for (int i = 0; i < 30; ++i) points.push_back({uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0), uniform(rng, 0.0, 1.0)});
  const auto a = kmeans_plus_plus_seeds(points, 5, 77);
  CHECK(a == kmeans_plus_plus_seeds(points, 5, 77));
  for (const auto& c : a) CHECK(std::find(points.begin(), points.end(), c) != points.end());
}

TEST_CASE("template attention: reciprocal weights and loop oracle") {
  Rng rng(12);
  torch::nn::Conv2d combiner(torch::nn::Conv2dOptions(2, 1, 1));
  combiner->to(torch::kFloat64);

  // Distances [0.5, 2.0] on a 1x1 template grid.
  auto templates = torch::tensor({0.5, 2.0}, torch::kFloat64).view({2, 1, 1});
  auto mask = torch::zeros({1, 1, 1, 1}, torch::kFloat64);
  auto a = template_attention(mask, templates, combiner);
  CHECK(a.distances[0][0].item<double>() == doctest::Approx(0.5));
  CHECK(a.weights[0][0].item<double>() == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(a.weights[0][1].item<double>() == doctest::Approx(0.5).epsilon(1e-5));

  // Exact match dominates.
  auto bank = test::random_tensor(rng, {4, 8, 8});
  auto exact = bank[2].clone().view({1, 1, 8, 8});
  torch::nn::Conv2d comb4(torch::nn::Conv2dOptions(4, 1, 1));
  comb4->to(torch::kFloat64);
  a = template_attention(exact, bank, comb4);
  CHECK(a.weights.argmax(1).item<std::int64_t>() == 2);
  CHECK(a.weights[0][2].item<double>() == doctest::Approx(1.0 / kAttentionEpsilon).epsilon(1e-3));

  for (int t = 0; t < 100; ++t) {
    const auto m = test::random_tensor(rng, {1, 1, 16, 16});
    a = template_attention(m, bank, comb4);
    const auto d = distance_oracle(test::to_array(m), test::to_array(bank.unsqueeze(0)));
    for (int k = 0; k < 4; ++k) {
      CHECK(a.distances[0][k].item<double>() == doctest::Approx(d[k]).epsilon(1e-12));
      CHECK(a.weights[0][k].item<double>() == doctest::Approx(1.0 / (d[k] + kAttentionEpsilon)).epsilon(1e-12));
    }
    CHECK(a.weights.argmax(1).item<std::int64_t>() == a.distances.argmin(1).item<std::int64_t>());
    CHECK(a.feature.sizes() == m.sizes());
  }
  CHECK_THROWS_AS(template_attention(mask, torch::zeros({0, 1, 1}), combiner), ValidationError);
}

TEST_CASE("stage-one shape contracts and determinism") {
  Rng rng(13);
  auto net = small_net(rng);
  const auto img = test::random_tensor(rng, {2, 3, 16, 16});
  const auto init = test::random_binary(rng, {2, 1, 16, 16});
  const auto a = net->forward(img, init);
  CHECK(a.modal.refined.sizes() == torch::IntArrayRef({2, 1, 16, 16}));
  CHECK(a.modal.parsing.sizes() == torch::IntArrayRef({2, 4, 16, 16}));
  CHECK(a.modal.feature.sizes() == torch::IntArrayRef({2, 4, 16, 16}));
  CHECK(a.amodal.amodal.sizes() == torch::IntArrayRef({2, 1, 16, 16}));
  CHECK(a.amodal.parsing.sizes() == torch::IntArrayRef({2, 4, 16, 16}));
  for (const auto& t : {a.modal.refined, a.amodal.amodal, a.modal.parsing, a.amodal.parsing}) {
    CHECK(t.min().item<double>() >= 0.0);
    CHECK(t.max().item<double>() <= 1.0);
  }
  CHECK(torch::allclose(a.amodal.parsing.sum(1), torch::ones({2, 16, 16}, torch::kFloat64)));
  const auto b = net->forward(img, init);
  CHECK(torch::equal(a.amodal.amodal, b.amodal.amodal));
  CHECK(torch::equal(a.modal.parsing, b.modal.parsing));
  CHECK_THROWS_AS(net->forward(img, torch::zeros({2, 1, 8, 8}, torch::kFloat64)), ValidationError);
  CHECK_THROWS_AS(net->amodal_forward(a.modal.feature, a.modal.refined, torch::zeros({2, 1, 8, 8}, torch::kFloat64)),
                  ValidationError);
}

TEST_CASE("mask head with zero weights outputs sigmoid of its bias") {
  Rng rng(14);
  auto net = small_net(rng);
  torch::NoGradGuard guard;
  auto& head = net->modal_hourglass()->mask_head();
  head->weight.zero_();
  head->bias.fill_(0.7);
  const auto out = net->modal_forward(test::random_tensor(rng, {1, 3, 16, 16}), test::random_binary(rng, {1, 1, 16, 16}));
  CHECK(torch::allclose(out.refined, torch::full_like(out.refined, 1.0 / (1.0 + std::exp(-0.7))), 0, 1e-15));
}

TEST_CASE("gradients of both hourglasses and the template attention") {
  Rng rng(15);
  auto net = small_net(rng);
  const auto img = test::random_tensor(rng, {1, 3, 16, 16});
  const auto init = test::random_binary(rng, {1, 1, 16, 16});
  const auto weights = test::random_tensor(rng, {1, 4, 16, 16});
  auto objective = [&] {
    const auto o = net->forward(img, init);
    return (o.amodal.amodal * weights.narrow(1, 0, 1)).sum() + (o.amodal.parsing * weights).sum() +
           (o.modal.parsing * weights).sum() + (o.modal.refined * weights.narrow(1, 1, 1)).sum();
  };
  const auto g = test::gradcheck(objective, test::named_parameters(*net), 6);
  CHECK_MESSAGE(g.ok, g.worst_name << " " << g.worst);

  auto refined = test::random_tensor(rng, {1, 1, 16, 16}).requires_grad_(true);
  auto attention = [&] { return (net->attend(refined).feature * weights.narrow(1, 2, 1)).sum(); };
  const auto ga = test::gradcheck(attention, {{"refined", refined}, {"combiner", net->template_combiner()->weight}});
  CHECK_MESSAGE(ga.ok, ga.worst_name << " " << ga.worst);
}

TEST_CASE("binarize and the invisible mask") {
  CHECK(binarize(torch::full({2, 2}, 0.6)).sum().item<double>() == 4);
  CHECK(binarize(torch::full({2, 2}, 0.4)).sum().item<double>() == 0);
  CHECK(binarize(torch::full({2, 2}, 0.5)).sum().item<double>() == 4);

  Rng rng(16);
  const auto m = test::random_mask(rng, {12, 12});
  CHECK(invisible_mask(m, m).count() == 0);
  CHECK(invisible_mask(m, BinaryMask({12, 12})) == m);
  for (int t = 0; t < 200; ++t) {
    const auto a = test::random_mask(rng, {9, 7});
    const auto b = test::random_mask(rng, {9, 7});
    CHECK(invisible_mask(a, b) == test::difference_oracle(a, b));
    const auto ta = nn::to_tensor(a);
    const auto tb = nn::to_tensor(b);
    CHECK(nn::to_mask(invisible_mask(ta, tb)) == test::difference_oracle(a, b));

    // With modal ⊆ amodal the invisible part and the modal mask partition the amodal mask.
    BinaryMask sub = b;
    for (std::size_t i = 0; i < sub.data().size(); ++i) sub.data()[i] &= a.data()[i];
    const auto inv = invisible_mask(a, sub);
    for (std::size_t i = 0; i < inv.data().size(); ++i) {
      CHECK((inv.data()[i] | sub.data()[i]) == a.data()[i]);
      CHECK((inv.data()[i] & sub.data()[i]) == 0);
    }
  }
}

TEST_CASE("patch discriminator output grid and gradients") {
  for (int side : {16, 40, 64}) {
    PatchDiscriminator d(DiscriminatorOptions{1, 4});
    const auto out = d->forward(torch::rand({2, 1, side, side}));
    CHECK(out.size(2) == side / 16);
    CHECK(out.size(3) == side / 16);
    CHECK(torch::isfinite(out).all().item<bool>());
  }
  Rng rng(17);
  PatchDiscriminator d(DiscriminatorOptions{3, 2});
  d->to(torch::kFloat64);
  test::randomize_parameters(*d, 5);
  const auto x = test::random_tensor(rng, {1, 3, 16, 16});
  const auto g = test::gradcheck([&] { return d->probability(x).sum(); }, test::named_parameters(*d));
  CHECK_MESSAGE(g.ok, g.worst_name << " " << g.worst);
}

TEST_CASE("stage-one loss: perfect predictions and weighting") {
  losses::FeatureEmbedding embedding;
  embedding->to(torch::kFloat64);
  Rng rng(18);
  const auto amodal = test::random_binary(rng, {1, 1, 16, 16});
  const auto modal = amodal * test::random_binary(rng, {1, 1, 16, 16});
  const auto parsing = test::random_one_hot(rng, 1, 3, 16, 16);
  StageOneOutput out;
  out.modal.refined = modal;
  out.modal.parsing = parsing;
  out.amodal.amodal = amodal;
  out.amodal.parsing = parsing;
  const Stage1Targets targets{modal, amodal, parsing, parsing};
  const auto half = torch::full({1, 1, 1, 1}, 0.5, torch::kFloat64);
  const auto terms = stage_one_loss(out, targets, half, half, embedding);
  CHECK(terms.seg.item<double>() < 1e-5);
  CHECK(terms.l1.item<double>() == 0.0);
  CHECK(terms.perceptual.item<double>() == 0.0);
  CHECK(terms.adv.item<double>() == doctest::Approx(std::log(2.0)));

  const Stage1Weights w;
  CHECK(w.seg == 1.0);
  CHECK(w.adv == 1.0);
  CHECK(w.gen == 0.1);
  CHECK(terms.total.item<double>() == doctest::Approx(terms.seg.item<double>() + terms.adv.item<double>() +
                                                      0.1 * terms.gen.item<double>()));
  CHECK_THROWS_AS(stage_one_loss(out, targets, half, half, embedding, Stage1Weights{1, -1, 0}), ValidationError);
}

TEST_CASE("stage-one loss gradients against every parameter tensor") {
  losses::FeatureEmbedding embedding;
  embedding->to(torch::kFloat64);
  Rng rng(19);
  auto net = small_net(rng);
  PatchDiscriminator disc(DiscriminatorOptions{1, 2});
  disc->to(torch::kFloat64);
  test::randomize_parameters(*disc, 3);
  const auto img = test::random_tensor(rng, {1, 3, 16, 16});
  const auto init = test::random_binary(rng, {1, 1, 16, 16});
  const auto amodal = test::random_binary(rng, {1, 1, 16, 16});
  const Stage1Targets targets{amodal * init, amodal, test::random_one_hot(rng, 1, 4, 16, 16),
                              test::random_one_hot(rng, 1, 4, 16, 16)};
  auto loss = [&] {
    const auto o = net->forward(img, init);
    return stage_one_loss(o, targets, disc->probability(amodal), disc->probability(o.amodal.amodal), embedding).total;
  };
  CHECK(std::isfinite(loss().item<double>()));
  const auto g = test::gradcheck(loss, test::named_parameters(*net), 4);
  CHECK_MESSAGE(g.ok, g.worst_name << " " << g.worst);
}
