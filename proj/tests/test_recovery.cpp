#include <doctest.h>

#include <cmath>

#include "deocc/core/errors.hpp"
#include "deocc/losses/embedding.hpp"
#include "deocc/maskcomp/discriminator.hpp"
#include "deocc/nn/convert.hpp"
#include "deocc/recovery/compositing.hpp"
#include "deocc/recovery/partial_conv.hpp"
#include "deocc/recovery/pga.hpp"
#include "deocc/recovery/recovery_net.hpp"
#include "deocc/recovery/stage_two_loss.hpp"
#include "support/torch_support.hpp"

using namespace deocc;
using namespace deocc::recovery;

namespace {

PgaModule make_pga(Rng& rng, PgaOptions o) {
  PgaModule pga(o);
  pga->to(torch::kFloat64);
  test::randomize_parameters(*pga, rng());
  return pga;
}

torch::Tensor param(torch::nn::Module& m, const std::string& name) { return m.named_parameters()[name]; }

std::vector<double> to_vector(const torch::Tensor& t) {
  auto c = t.contiguous().to(torch::kFloat64);
  return {c.data_ptr<double>(), c.data_ptr<double>() + c.numel()};
}

// Keys from a 1x1 conv evaluated by the loop oracle, laid out [channel][pixel].
test::Matrix key_oracle(const test::Array4& input, torch::nn::Module& pga, const std::string& conv) {
  const auto w = test::to_array(param(pga, conv + ".weight"));
  const auto out = test::conv_oracle(input, w, to_vector(param(pga, conv + ".bias")), 1, 0);
  test::Matrix k(out.c, std::vector<double>(out.h * out.w));
  for (int c = 0; c < out.c; ++c) {
    for (int y = 0; y < out.h; ++y) {
      for (int x = 0; x < out.w; ++x) k[c][y * out.w + x] = out.at(0, c, y, x);
    }
  }
  return k;
}

struct PgaInputs {
  torch::Tensor feature, modal_parsing, amodal_parsing, visible;
};

PgaInputs pga_inputs(Rng& rng, int c, int p, int h, int w) {
  return {test::random_tensor(rng, {1, c, h, w}, -1.0, 1.0), test::random_one_hot(rng, 1, p, h, w),
          test::random_one_hot(rng, 1, p, h, w), test::random_binary(rng, {1, 1, h, w})};
}

}  // namespace

TEST_CASE("background proportion") {
  Rng rng(1);
  const auto img = test::random_tensor(rng, {1, 3, 6, 6});
  const auto amodal = test::random_binary(rng, {1, 1, 6, 6});
  CHECK(torch::equal(apply_background_proportion(img, amodal, 1.0), img));
  const auto zeroed = apply_background_proportion(img, amodal, 0.0);
  CHECK(torch::equal(zeroed, img * amodal));
  CHECK(kDefaultBackgroundProportion == 0.3);
  CHECK_THROWS_AS(apply_background_proportion(img, amodal, 1.5), ValidationError);

  const auto image = nn::to_image(img);
  const auto mask = nn::to_mask(amodal[0]);
  const auto scaled = apply_background_proportion(image, mask, 0.3);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 6; ++x) {
        CHECK(scaled.at(c, y, x) == doctest::Approx(image.at(c, y, x) * (mask.at(y, x) ? 1.0 : 0.3)));
      }
    }
  }
}

TEST_CASE("compositing") {
  Rng rng(2);
  const auto rec = test::random_tensor(rng, {1, 3, 5, 5});
  const auto occ = test::random_tensor(rng, {1, 3, 5, 5});
  const auto vis = test::random_binary(rng, {1, 1, 5, 5});
  CHECK(torch::equal(composite(rec, occ, torch::ones_like(vis)), occ));
  CHECK(torch::equal(composite(rec, occ, torch::zeros_like(vis)), rec));
  const auto once = composite(rec, occ, vis);
  CHECK(torch::equal(composite(once, occ, vis), once));

  const auto a = nn::to_image(rec);
  const auto b = nn::to_image(occ);
  const auto m = nn::to_mask(vis[0]);
  const auto c = composite(a, b, m);
  for (int ch = 0; ch < 3; ++ch) {
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) CHECK(c.at(ch, y, x) == (m.at(y, x) ? b.at(ch, y, x) : a.at(ch, y, x)));
    }
  }
  CHECK(torch::equal(initial_validity(vis, vis, 0.0), vis));
  const auto amodal = torch::maximum(vis, test::random_binary(rng, {1, 1, 5, 5}));
  CHECK(torch::equal(initial_validity(vis, amodal, 0.3), torch::maximum(vis, 1 - amodal)));
}

TEST_CASE("partial convolution examples") {
  Rng rng(3);
  PartialConv2d pc(PartialConvOptions{3, 4, 3, 1});
  pc->to(torch::kFloat64);
  test::randomize_parameters(*pc, 4);
  const auto x = test::random_tensor(rng, {2, 3, 8, 8});

  // All-ones mask: interior windows match a dense convolution; border windows are renormalised.
  auto ones = torch::ones({2, 1, 8, 8}, torch::kFloat64);
  auto r = pc->forward(x, ones);
  auto dense = torch::conv2d(x, pc->weight(), pc->bias(), 1, 1);
  CHECK(torch::allclose(r.output.narrow(2, 1, 6).narrow(3, 1, 6), dense.narrow(2, 1, 6).narrow(3, 1, 6), 0, 1e-12));
  CHECK(torch::equal(r.mask, ones));

  r = pc->forward(x, torch::zeros({2, 1, 8, 8}, torch::kFloat64));
  CHECK(r.output.abs().max().item<double>() == 0.0);
  CHECK(r.mask.abs().max().item<double>() == 0.0);

  // Single precision on an interior-only geometry (valid padding).
  const auto xf = test::random_tensor(rng, {1, 3, 8, 8}, 0, 1, torch::kFloat32);
  const auto wf = pc->weight().to(torch::kFloat32);
  const auto bf = pc->bias().to(torch::kFloat32);
  const auto pf = partial_conv(xf, torch::ones({1, 1, 8, 8}), wf, bf, 1, 0);
  CHECK((pf.output - torch::conv2d(xf, wf, bf)).abs().max().item<float>() < 1e-5f);
}

TEST_CASE("partial convolution matches the sliding-window oracle") {
  Rng rng(5);
  for (int t = 0; t < 120; ++t) {
    const int stride = 1 + t % 2;
    const int cin = 1 + t % 3;
    const auto x = test::random_tensor(rng, {1, cin, 8, 8}, -1, 1);
    const auto m = test::random_binary(rng, {1, 1, 8, 8}, 0.3);
    const auto w = test::random_tensor(rng, {2, cin, 3, 3}, -1, 1);
    const auto b = test::random_tensor(rng, {2}, -1, 1);
    const auto got = partial_conv(x, m, w, b, stride, 1);
    const auto want = test::partial_conv_oracle(test::to_array(x), test::to_array(m), test::to_array(w),
                                                to_vector(b), stride, 1);
    const auto out = test::to_array(got.output);
    const auto mask = test::to_array(got.mask);
    REQUIRE(out.v.size() == want.out.v.size());
    double err = 0;
    for (std::size_t i = 0; i < out.v.size(); ++i) err = std::max(err, std::abs(out.v[i] - want.out.v[i]));
    CHECK(err < 1e-12);
    // The updated mask is 1 exactly where the window saw a valid pixel.
    CHECK(mask.v == want.mask.v);
  }
}

TEST_CASE("partial conv gradient") {
  Rng rng(6);
  PartialConv2d pc(PartialConvOptions{2, 3, 3, 2});
  pc->to(torch::kFloat64);
  test::randomize_parameters(*pc, 7);
  auto x = test::random_tensor(rng, {1, 2, 8, 8}).requires_grad_(true);
  const auto m = test::random_binary(rng, {1, 1, 8, 8});
  const auto g = test::gradcheck([&] { return pc->forward(x, m).output.pow(2).sum(); },
                                 {{"x", x}, {"weight", pc->weight()}, {"bias", pc->bias()}});
  CHECK_MESSAGE(g.ok, g.worst_name << " " << g.worst);
}

TEST_CASE("PGA body stream") {
  Rng rng(8);
  auto pga = make_pga(rng, PgaOptions{6, 4, 0});
  auto in = pga_inputs(rng, 6, 4, 8, 8);
  const auto out = pga->body_stream(in.feature, in.modal_parsing, in.amodal_parsing);
  CHECK(out.sizes() == in.feature.sizes());
  CHECK(param(*pga, "reduce.weight").size(0) == 4);

  // All-background parsing leaves only the fusion bias.
  auto bg = torch::zeros_like(in.modal_parsing);
  bg.select(1, 0).fill_(1.0);
  const auto bias_only = pga->body_stream(in.feature, bg, bg);
  CHECK(torch::allclose(bias_only, param(*pga, "body_fuse.bias").view({1, 6, 1, 1}).expand_as(bias_only), 0, 1e-15));

  auto f = in.feature.clone().requires_grad_(true);
  const auto g = test::gradcheck([&] { return pga->body_stream(f, in.modal_parsing, in.amodal_parsing).pow(2).sum(); },
                                 {{"feature", f}, {"reduce", param(*pga, "reduce.weight")},
                                  {"body_fuse", param(*pga, "body_fuse.weight")}});
  CHECK_MESSAGE(g.ok, g.worst_name << " " << g.worst);
}

TEST_CASE("relation matrix matches the triple-loop oracle") {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    auto pga = make_pga(rng, PgaOptions{3, 3, 2});
    auto in = pga_inputs(rng, 3, 3, 4, 4);
    const auto raw = pga->relation_matrix(in.feature, in.modal_parsing, in.amodal_parsing, in.visible, true);
    const auto soft = pga->relation_matrix(in.feature, in.modal_parsing, in.amodal_parsing, in.visible);

    const auto k_vis = key_oracle(test::to_array(torch::cat({in.feature, in.modal_parsing}, 1)), *pga, "phi");
    const auto k_amo = key_oracle(test::to_array(torch::cat({in.feature, in.amodal_parsing}, 1)), *pga, "psi");
    const auto want_raw = test::relation_raw_oracle(k_vis, k_amo, to_vector(in.visible));
    const auto want = test::column_softmax_oracle(want_raw);
    const auto got_raw = test::to_matrix(raw[0]);
    const auto got = test::to_matrix(soft[0]);
    double err = 0;
    for (std::size_t p = 0; p < 16; ++p) {
      for (std::size_t q = 0; q < 16; ++q) {
        err = std::max(err, std::abs(got_raw[p][q] - want_raw[p][q]));
        err = std::max(err, std::abs(got[p][q] - want[p][q]));
      }
    }
    CHECK(err < 1e-9);
  }
}

TEST_CASE("relation matrix invariants") {
  Rng rng(10);
  for (int t = 0; t < 100; ++t) {
    auto pga = make_pga(rng, PgaOptions{4, 3, 3});
    auto in = pga_inputs(rng, 4, 3, 4, 5);
    const auto raw = pga->relation_matrix(in.feature, in.modal_parsing, in.amodal_parsing, in.visible, true)[0];
    const auto r = pga->relation_matrix(in.feature, in.modal_parsing, in.amodal_parsing, in.visible)[0];
    const auto vis = to_vector(in.visible);
    const int hw = 20;
    CHECK(torch::allclose(r.sum(0), torch::ones({hw}, torch::kFloat64), 0, 1e-12));
    CHECK(r.min().item<double>() >= 0.0);
    for (int p = 0; p < hw; ++p) {
      if (vis[p] == 0.0) CHECK(raw[p].abs().max().item<double>() == 0.0);
    }
    // Within a column the masked-out rows share one value; visible columns are uniform.
    for (int q = 0; q < hw; ++q) {
      std::optional<double> shared;
      for (int p = 0; p < hw; ++p) {
        if (vis[p] != 0.0) continue;
        const double v = r[p][q].item<double>();
        if (!shared) shared = v;
        CHECK(std::abs(v - *shared) < 1e-12);
      }
      if (vis[q] != 0.0) {
        for (int p = 0; p < hw; ++p) CHECK(std::abs(r[p][q].item<double>() - 1.0 / hw) < 1e-12);
      }
    }
  }
  // With no visible pixel every row is uniform.
  auto pga = make_pga(rng, PgaOptions{4, 3, 3});
  auto in = pga_inputs(rng, 4, 3, 4, 4);
  const auto r = pga->relation_matrix(in.feature, in.modal_parsing, in.amodal_parsing, torch::zeros_like(in.visible));
  CHECK(torch::allclose(r, torch::full_like(r, 1.0 / 16), 0, 1e-12));
}

TEST_CASE("PGA assemblies and streams") {
  Rng rng(11);
  auto in = pga_inputs(rng, 6, 4, 8, 8);
  std::vector<torch::Tensor> outs;
  for (auto assembly : {Assembly::kFusion, Assembly::kCascade}) {
    for (auto [body, rel] : {std::pair{true, true}, {true, false}, {false, true}}) {
      Rng param_rng(99);
      PgaOptions o{6, 4, 0, assembly, body, rel};
      auto pga = make_pga(param_rng, o);
      const auto out = pga->forward(in.feature, in.modal_parsing, in.amodal_parsing, in.visible);
      CHECK(out.sizes() == in.feature.sizes());
      CHECK(torch::isfinite(out).all().item<bool>());
      outs.push_back(out);

      auto f = in.feature.clone().requires_grad_(true);
      auto params = test::named_parameters(*pga);
      params.emplace_back("feature", f);
      const auto g = test::gradcheck(
          [&] { return pga->forward(f, in.modal_parsing, in.amodal_parsing, in.visible).pow(2).sum(); }, params);
      CHECK_MESSAGE(g.ok, to_string(assembly) << " " << g.worst_name << " " << g.worst);
    }
  }
  CHECK_FALSE(torch::allclose(outs[0], outs[3]));
  CHECK(PgaOptions{}.assembly == Assembly::kFusion);
  CHECK(parse_assembly("cascade") == Assembly::kCascade);
  CHECK_THROWS_AS(parse_assembly("stacked"), ValidationError);

  // Parsing maps and visibility at a finer resolution are resampled to the feature.
  Rng param_rng(99);
  auto pga = make_pga(param_rng, PgaOptions{6, 4, 0});
  const auto up = [](const torch::Tensor& t) { return t.repeat_interleave(2, 2).repeat_interleave(2, 3); };
  CHECK(torch::allclose(pga->forward(in.feature, up(in.modal_parsing), up(in.amodal_parsing), up(in.visible)),
                        outs[0], 0, 1e-12));
}

TEST_CASE("recovery network contracts") {
  Rng rng(12);
  RecoveryOptions o;
  o.part_count = 4;
  o.base_channels = 4;
  RecoveryNet net(o);
  const auto img = test::random_tensor(rng, {2, 3, 64, 64}, 0, 1, torch::kFloat32);
  const auto vis = test::random_binary(rng, {2, 1, 64, 64}, 0.5, torch::kFloat32);
  const auto amo = torch::maximum(vis, test::random_binary(rng, {2, 1, 64, 64}, 0.5, torch::kFloat32));
  const auto mp = test::random_one_hot(rng, 2, 4, 64, 64, torch::kFloat32);
  const auto ap = test::random_one_hot(rng, 2, 4, 64, 64, torch::kFloat32);
  const auto out = net->forward(img, vis, amo, mp, ap);
  CHECK(out.sizes() == img.sizes());
  CHECK(out.min().item<float>() >= 0.0f);
  CHECK(out.max().item<float>() <= 1.0f);
  CHECK(net->last_pga_applications() == 3);
  CHECK(torch::equal(out, net->forward(img, vis, amo, mp, ap)));
  CHECK_THROWS_AS(net->forward(img, vis.narrow(2, 0, 32), amo, mp, ap), ValidationError);

  o.max_relation_pixels = 100;
  RecoveryNet capped(o);
  capped->forward(img, vis, amo, mp, ap);
  CHECK(capped->last_pga_applications() == 2);

  o.background_w = -0.1;
  CHECK_THROWS_AS(RecoveryNet{o}, ValidationError);
}

TEST_CASE("recovery network gradients") {
  Rng rng(13);
  for (auto assembly : {Assembly::kFusion, Assembly::kCascade}) {
    RecoveryOptions o;
    o.part_count = 3;
    o.base_channels = 2;
    o.assembly = assembly;
    RecoveryNet net(o);
    net->to(torch::kFloat64);
    test::randomize_parameters(*net, 21, 0.25);
    const auto img = test::random_tensor(rng, {1, 3, 8, 8});
    const auto vis = test::random_binary(rng, {1, 1, 8, 8});
    const auto amo = torch::maximum(vis, test::random_binary(rng, {1, 1, 8, 8}));
    const auto mp = test::random_one_hot(rng, 1, 3, 8, 8);
    const auto ap = test::random_one_hot(rng, 1, 3, 8, 8);
    const auto target = test::random_tensor(rng, {1, 3, 8, 8});
    const auto g = test::gradcheck([&] { return (net->forward(img, vis, amo, mp, ap) - target).pow(2).sum(); },
                                   test::named_parameters(*net), 4);
    CHECK_MESSAGE(g.ok, to_string(assembly) << " " << g.worst_name << " " << g.worst);
  }
}

TEST_CASE("stage-two loss terms") {
  losses::FeatureEmbedding e;
  e->to(torch::kFloat64);
  std::vector<test::Array4> weights;
  for (const auto& b : e->buffers()) weights.push_back(test::to_array(b));
  Rng rng(14);
  const Stage2Weights w;
  CHECK(w.adv == 0.1);
  CHECK(w.l1 == 1.0);
  CHECK(w.perceptual == 1.0);
  CHECK(w.style == 40.0);

  const auto a = test::random_tensor(rng, {1, 3, 8, 8});
  const auto half = torch::full({1, 1, 1, 1}, 0.5, torch::kFloat64);
  const auto same = stage_two_loss(a, a, half, half, e);
  CHECK(same.l1.item<double>() == 0.0);
  CHECK(same.perceptual.item<double>() == 0.0);
  CHECK(same.style.item<double>() == 0.0);

  for (int t = 0; t < 10; ++t) {
    const auto x = test::random_tensor(rng, {1, 3, 8, 8});
    const auto y = test::random_tensor(rng, {1, 3, 8, 8});
    const auto dr = test::random_tensor(rng, {1, 1, 2, 2}, 0.05, 0.95);
    const auto df = test::random_tensor(rng, {1, 1, 2, 2}, 0.05, 0.95);
    const auto terms = stage_two_loss(x, y, dr, df, e);
    double l1 = 0;
    const auto xa = test::to_array(x);
    const auto ya = test::to_array(y);
    for (std::size_t i = 0; i < xa.v.size(); ++i) l1 += std::abs(xa.v[i] - ya.v[i]);
    double adv = 0;
    for (double d : to_vector(df)) adv -= std::log(d);
    CHECK(terms.l1.item<double>() == doctest::Approx(l1 / xa.v.size()).epsilon(1e-12));
    CHECK(terms.adv.item<double>() == doctest::Approx(adv / 4).epsilon(1e-12));
    CHECK(terms.perceptual.item<double>() == doctest::Approx(test::perceptual_oracle(xa, ya, weights)).epsilon(1e-10));
    CHECK(terms.style.item<double>() == doctest::Approx(test::style_oracle(xa, ya, weights)).epsilon(1e-10));
    CHECK(terms.total.item<double>() ==
          doctest::Approx(0.1 * terms.adv.item<double>() + terms.l1.item<double>() + terms.perceptual.item<double>() +
                          40 * terms.style.item<double>()));
  }
  CHECK_THROWS_AS(stage_two_loss(a, a, half, half, e, Stage2Weights{0.1, 1, -1, 40}), ValidationError);
}

TEST_CASE("image discriminator gradient") {
  Rng rng(15);
  maskcomp::PatchDiscriminator d(maskcomp::DiscriminatorOptions{3, 2});
  d->to(torch::kFloat64);
  test::randomize_parameters(*d, 8);
  auto x = test::random_tensor(rng, {1, 3, 16, 16}).requires_grad_(true);
  const auto g = test::gradcheck([&] { return d->forward(x).sum(); }, {{"x", x}});
  CHECK_MESSAGE(g.ok, g.worst_name << " " << g.worst);
}
