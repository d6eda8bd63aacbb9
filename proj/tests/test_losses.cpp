#include <doctest.h>

#include <cmath>

#include "deocc/core/errors.hpp"
#include "deocc/losses/embedding.hpp"
#include "deocc/losses/losses.hpp"
#include "support/torch_support.hpp"

using namespace deocc;
using namespace deocc::losses;

namespace {

std::vector<test::Array4> embedding_weights(const FeatureEmbedding& e) {
  std::vector<test::Array4> w;
  for (const auto& b : e->buffers()) w.push_back(test::to_array(b));
  return w;
}

}  // namespace

TEST_CASE("cross-entropy: perfect, uniform and oracle cases") {
  const auto target = torch::tensor({0.0, 1.0, 1.0, 0.0}, torch::kFloat64).view({1, 1, 2, 2});
  CHECK(losses::binary_cross_entropy(target, target).item<double>() < 1e-6);
  const auto half = torch::full({1, 1, 2, 2}, 0.5, torch::kFloat64);
  CHECK(losses::binary_cross_entropy(half, target).item<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Rng rng(3);
  auto one_hot = test::random_one_hot(rng, 2, 2, 3, 3);
  CHECK(categorical_cross_entropy(one_hot, one_hot).item<double>() < 1e-6);
  CHECK(categorical_cross_entropy(torch::full_like(one_hot, 0.5), one_hot).item<double>() ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  for (int t = 0; t < 100; ++t) {
    const auto p = test::random_tensor(rng, {2, 1, 4, 4}, 0.0, 1.0);
    const auto y = test::random_binary(rng, {2, 1, 4, 4});
    const auto a = test::to_array(p);
    const auto b = test::to_array(y);
    CHECK(losses::binary_cross_entropy(p, y).item<double>() == doctest::Approx(test::bce_oracle(a.v, b.v)).epsilon(1e-12));

    const auto logits = test::random_tensor(rng, {2, 5, 3, 3}, -2.0, 2.0);
    const auto probs = torch::softmax(logits, 1);
    const auto oh = test::random_one_hot(rng, 2, 5, 3, 3);
    CHECK(categorical_cross_entropy(probs, oh).item<double>() ==
          doctest::Approx(test::cce_oracle(test::to_array(probs), test::to_array(oh))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(losses::binary_cross_entropy(half, torch::zeros({1, 1, 2, 3}, torch::kFloat64)), ValidationError);
}

TEST_CASE("l1 examples") {
  Rng rng(4);
  const auto a = test::random_tensor(rng, {1, 3, 4, 4});
  CHECK(losses::l1(a, a).item<double>() == 0.0);
  const auto m = test::random_binary(rng, {1, 1, 8, 8});
  CHECK(losses::l1(m, 1 - m).item<double>() == 1.0);
  CHECK(losses::l1(a + 0.25, a).item<double>() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("adversarial pair") {
  const auto half = torch::full({1, 1, 2, 2}, 0.5, torch::kFloat64);
  const auto at_half = adversarial_pair(half, half);
  CHECK(at_half.discriminator.item<double>() == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK(at_half.discriminator.item<double>() == doctest::Approx(-(std::log(0.5) + std::log(0.5))));

  const auto perfect = adversarial_pair(torch::ones({1, 1, 2, 2}, torch::kFloat64), torch::zeros({1, 1, 2, 2}, torch::kFloat64));
  CHECK(perfect.discriminator.item<double>() >= 0.0);
  CHECK(perfect.discriminator.item<double>() < 1e-6);

  double prev = 1e9;
  for (double d : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto fake = torch::full({1, 1, 2, 2}, d, torch::kFloat64);
    const double g = adversarial_pair(half, fake).generator.item<double>();
    CHECK(g < prev);
    prev = g;
  }
  // The minimax generator value is the literal objective.
  const auto fake = torch::full({1, 1, 2, 2}, 0.2, torch::kFloat64);
  const auto mm = adversarial_pair(half, fake, GeneratorObjective::kMinimax);
  CHECK(mm.generator.item<double>() == doctest::Approx(std::log(0.5) + std::log(0.8)).epsilon(1e-12));
  auto fake_var = fake.clone().requires_grad_(true);
  adversarial_pair(half, fake_var).generator.backward();
  CHECK(fake_var.grad().sum().item<double>() < 0.0);
}

TEST_CASE("embedding is frozen and deterministic") {
  FeatureEmbedding a;
  FeatureEmbedding b;
  CHECK(a->parameters().empty());
  Rng rng(6);
  const auto x = test::random_tensor(rng, {2, 3, 16, 16}, 0.0, 1.0, torch::kFloat32);
  const auto fa = a->features(x);
  const auto fb = b->features(x);
  REQUIRE(fa.size() == 3);
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(torch::equal(fa[i], fb[i]));
  CHECK(a->pooled(x).size(1) == a->feature_dim());
  FeatureEmbedding other(EmbeddingOptions{1, {8, 16, 32}});
  CHECK_FALSE(torch::equal(other->features(x)[0], fa[0]));
}

TEST_CASE("perceptual and style against loop oracles") {
  FeatureEmbedding e;
  e->to(torch::kFloat64);
  const auto weights = embedding_weights(e);
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto a = test::random_tensor(rng, {1, 3, 8, 8});
    const auto b = test::random_tensor(rng, {1, 3, 8, 8});
    CHECK(perceptual(a, a, e).item<double>() == 0.0);
    CHECK(style(a, a, e).item<double>() == 0.0);
    const double p = perceptual(a, b, e).item<double>();
    const double s = style(a, b, e).item<double>();
    CHECK(p >= 0.0);
    CHECK(p == doctest::Approx(test::perceptual_oracle(test::to_array(a), test::to_array(b), weights)).epsilon(1e-10));
    CHECK(s == doctest::Approx(test::style_oracle(test::to_array(a), test::to_array(b), weights)).epsilon(1e-10));
  }
}

TEST_CASE("masks enter the perceptual loss as three identical channels") {
  FeatureEmbedding e;
  e->to(torch::kFloat64);
  Rng rng(8);
  const auto m = test::random_binary(rng, {1, 1, 8, 8});
  const auto n = test::random_binary(rng, {1, 1, 8, 8});
  CHECK(perceptual(m, n, e).item<double>() ==
        doctest::Approx(perceptual(m.repeat({1, 3, 1, 1}), n.repeat({1, 3, 1, 1}), e).item<double>()));
}

TEST_CASE("gram matrices ignore spatial permutations") {
  Rng rng(9);
  const auto f = test::random_tensor(rng, {1, 4, 4, 4});
  const auto flat = f.reshape({1, 4, 16});
  const auto perm = torch::randperm(16, torch::TensorOptions().dtype(torch::kLong));
  const auto shuffled = flat.index_select(2, perm).reshape({1, 4, 4, 4});
  CHECK(torch::allclose(gram_matrix(f), gram_matrix(shuffled), 1e-12, 1e-12));
  // Oracle on random 4x4 features.
  const auto g = gram_matrix(f);
  const auto a = test::to_array(f);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double s = 0;
      for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 4; ++x) s += a.at(0, i, y, x) * a.at(0, j, y, x);
      }
      CHECK(g[0][i][j].item<double>() == doctest::Approx(s / 64.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("gradients of every loss term match finite differences") {
  FeatureEmbedding e;
  e->to(torch::kFloat64);
  Rng rng(10);
  auto p = test::random_tensor(rng, {1, 1, 8, 8}, 0.05, 0.95).requires_grad_(true);
  const auto y = test::random_binary(rng, {1, 1, 8, 8});
  auto logits = test::random_tensor(rng, {1, 4, 8, 8}, -1, 1).requires_grad_(true);
  const auto oh = test::random_one_hot(rng, 1, 4, 8, 8);
  auto img = test::random_tensor(rng, {1, 3, 8, 8}).requires_grad_(true);
  const auto ref = test::random_tensor(rng, {1, 3, 8, 8});
  auto d = test::random_tensor(rng, {1, 1, 2, 2}, 0.1, 0.9).requires_grad_(true);
  const auto dr = test::random_tensor(rng, {1, 1, 2, 2}, 0.1, 0.9);

  CHECK(test::gradcheck([&] { return losses::binary_cross_entropy(p, y); }, {{"p", p}}).ok);
  CHECK(test::gradcheck([&] { return categorical_cross_entropy(torch::softmax(logits, 1), oh); }, {{"z", logits}}).ok);
  CHECK(test::gradcheck([&] { return losses::l1(img, ref); }, {{"img", img}}).ok);
  CHECK(test::gradcheck([&] { return perceptual(img, ref, e); }, {{"img", img}}).ok);
  CHECK(test::gradcheck([&] { return style(img, ref, e); }, {{"img", img}}).ok);
  CHECK(test::gradcheck([&] { return adversarial_pair(dr, d).generator; }, {{"d", d}}).ok);
  CHECK(test::gradcheck([&] { return adversarial_pair(dr, d, GeneratorObjective::kMinimax).generator; }, {{"d", d}}).ok);
  CHECK(test::gradcheck([&] { return adversarial_pair(dr, d).discriminator; }, {{"d", d}}).ok);
}
