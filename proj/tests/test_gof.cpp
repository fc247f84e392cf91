#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fksd/gof.hpp"
#include "fksd/samplers.hpp"

using namespace fksd;

namespace {

SteinContext bm_context(const Grid& g, KernelFamily family, double gamma = 1.0) {
  return make_stein_context(brownian_motion_target(g), KernelConfig{family, std::nullopt, gamma});
}

std::vector<FunctionSample> bm_samples(const Grid& g, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FunctionSample> xs;
  for (int i = 0; i < n; ++i) xs.push_back(sample_bm(g, rng));
  return xs;
}

}  // namespace

TEST_CASE("multinomial weights") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto w = multinomial_weights(37, rng);
    int sum = 0;
    for (int x : w) {
      CHECK(x >= 0);
      sum += x;
    }
    CHECK(sum == 37);
  }
}

TEST_CASE("bootstrap replicate") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  SteinContext ctx = bm_context(g, KernelFamily::SE);
  auto xs = bm_samples(g, 6, 11);
  SteinGram gram = build_gram(ctx, xs);

  SUBCASE("uniform weights give exactly zero") {
    std::vector<int> w(6, 1);
    CHECK(bootstrap_replicate(gram, w) == 0.0);
  }

  SUBCASE("n = 2 with weights (2,0)") {
    auto xs2 = bm_samples(g, 2, 13);
    SteinGram g2 = build_gram(ctx, xs2);
    double h12 = g2.entries(0, 1);
    CHECK(bootstrap_replicate(g2, {2, 0}) == doctest::Approx(-h12 / 2.0).epsilon(1e-12));
    CHECK(bootstrap_replicate(g2, {0, 2}) == doctest::Approx(-h12 / 2.0).epsilon(1e-12));
  }

  SUBCASE("random multinomial weights are finite and match brute force") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      auto w = multinomial_weights(6, rng);
      double fast = bootstrap_replicate(gram, w);
      double brute = 0.0;
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
          if (i != j) brute += (w[i] - 1.0) * (w[j] - 1.0) * gram.entries(i, j);
      brute /= 36.0;
      CHECK(std::isfinite(fast));
      CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
    }
  }

  SUBCASE("invalid weights are rejected") {
    CHECK_THROWS_AS(bootstrap_replicate(gram, {2, 1, 1, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_replicate(gram, {1, 1, 1}), std::invalid_argument);
  }
}

TEST_CASE("n = 2 bootstrap mean by exhaustive enumeration") {
  // weight vectors {(2,0),(1,1),(0,2)} with probabilities {1/4,1/2,1/4}:
  // mean replicate = -h12/4
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  SteinContext ctx = bm_context(g, KernelFamily::IMQ);
  auto xs = bm_samples(g, 2, 19);
  SteinGram gram = build_gram(ctx, xs);
  double h12 = gram.entries(0, 1);
  double mean = 0.25 * bootstrap_replicate(gram, {2, 0}) +
                0.5 * bootstrap_replicate(gram, {1, 1}) +
                0.25 * bootstrap_replicate(gram, {0, 2});
  CHECK(mean == doctest::Approx(-h12 / 4.0).epsilon(1e-12));
}

TEST_CASE("run_test basics") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  SteinContext ctx = bm_context(g, KernelFamily::SE);
  auto xs = bm_samples(g, 20, 23);

  TestConfig cfg;
  cfg.n_bootstrap = 200;
  cfg.seed = 99;

  TestResult a = run_test(xs, ctx, cfg);
  TestResult b = run_test(xs, ctx, cfg);
  CHECK(a.statistic == b.statistic);
  CHECK(a.threshold == b.threshold);
  CHECK(a.reject == b.reject);
  CHECK(a.replicates == b.replicates);
  CHECK(a.reject == (a.statistic > a.threshold));
  CHECK(int(a.replicates.size()) == cfg.n_bootstrap);

  SUBCASE("alpha near 1 takes the minimum replicate") {
    TestConfig hi = cfg;
    hi.alpha = 0.999;
    TestResult r = run_test(xs, ctx, hi);
    double mn = *std::min_element(r.replicates.begin(), r.replicates.end());
    CHECK(r.threshold == mn);
  }

  SUBCASE("threshold is monotone in alpha") {
    TestConfig a1 = cfg, a2 = cfg;
    a1.alpha = 0.01;
    a2.alpha = 0.20;
    CHECK(run_test(xs, ctx, a1).threshold >= run_test(xs, ctx, a2).threshold);
  }

  SUBCASE("bad inputs") {
    std::vector<FunctionSample> one{xs[0]};
    CHECK_THROWS_AS(run_test(one, ctx, cfg), std::invalid_argument);
    TestConfig bad = cfg;
    bad.alpha = 1.5;
    CHECK_THROWS_AS(run_test(xs, ctx, bad), std::invalid_argument);
  }
}

TEST_CASE("power study determinism and bookkeeping") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  Target bm = brownian_motion_target(g);

  PowerStudy study;
  study.sampler = [g](Rng& rng) {
    std::vector<FunctionSample> xs;
    for (int i = 0; i < 15; ++i) xs.push_back(sample_bm(g, rng));
    return xs;
  };
  study.context_builder = [bm](const std::vector<FunctionSample>& xs) {
    double gamma = median_bandwidth(xs, std::nullopt);
    return make_stein_context(bm, KernelConfig{KernelFamily::SE, std::nullopt, gamma});
  };

  TestConfig cfg;
  cfg.n_bootstrap = 100;

  auto serial = power_study(study, cfg, 12, 7, 1);
  auto parallel = power_study(study, cfg, 12, 7, 4);
  REQUIRE(serial.size() == 12);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].statistic == parallel[i].statistic);
    CHECK(serial[i].threshold == parallel[i].threshold);
    CHECK(serial[i].gamma == parallel[i].gamma);
    CHECK(serial[i].reject == parallel[i].reject);
  }

  int count = 0;
  for (const auto& r : serial) count += r.reject ? 1 : 0;
  CHECK(rejection_rate(serial) == doctest::Approx(double(count) / 12.0));

  CHECK_THROWS_AS(power_study(study, cfg, 0, 7), std::invalid_argument);
}

TEST_CASE("null rejection rate is near alpha") {
  // scaled-down version of the size experiment: n = 25, 60 repetitions
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  Target bm = brownian_motion_target(g);

  PowerStudy study;
  study.sampler = [g](Rng& rng) {
    std::vector<FunctionSample> xs;
    for (int i = 0; i < 25; ++i) xs.push_back(sample_bm(g, rng));
    return xs;
  };
  study.context_builder = [bm](const std::vector<FunctionSample>& xs) {
    double gamma = median_bandwidth(xs, std::nullopt);
    return make_stein_context(bm, KernelConfig{KernelFamily::SE, std::nullopt, gamma});
  };

  TestConfig cfg;
  cfg.n_bootstrap = 500;
  double rate = rejection_rate(power_study(study, cfg, 60, 2024));
  CHECK(rate <= 0.20);
}

TEST_CASE("obvious alternative is always rejected") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  Target bm = brownian_motion_target(g);

  PowerStudy study;
  study.sampler = [g](Rng& rng) {
    std::vector<FunctionSample> xs;
    for (int i = 0; i < 25; ++i) xs.push_back(sample_ou(g, rng));
    return xs;
  };
  study.context_builder = [bm](const std::vector<FunctionSample>& xs) {
    double gamma = median_bandwidth(xs, std::nullopt);
    return make_stein_context(bm, KernelConfig{KernelFamily::SE, std::nullopt, gamma});
  };

  TestConfig cfg;
  cfg.n_bootstrap = 300;
  double rate = rejection_rate(power_study(study, cfg, 20, 5));
  CHECK(rate == doctest::Approx(1.0));
}
