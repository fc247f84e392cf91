#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "fksd/gof.hpp"
#include "fksd/samplers.hpp"
#include "fksd/stein.hpp"

using namespace fksd;

namespace {

SteinContext bm_context(Eigen::Index m, KernelFamily family, double gamma = 1.0) {
  Grid g = make_uniform_grid(0.0, 1.0, m);
  Target t = brownian_motion_target(g);
  return make_stein_context(std::move(t), KernelConfig{family, std::nullopt, gamma});
}

std::vector<FunctionSample> bm_samples(const Grid& g, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FunctionSample> xs;
  for (int i = 0; i < n; ++i) xs.push_back(sample_bm(g, rng));
  return xs;
}

}  // namespace

TEST_CASE("context precomputation") {
  SteinContext ctx = bm_context(256, KernelFamily::SE, 0.8);
  CHECK(ctx.trace_SC2 >= 0.0);
  // <SCf, g> = <f, CSg> for random probes (C, S self-adjoint)
  const Grid& g = ctx.target.grid;
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Vector f(g.m), h(g.m);
    for (Eigen::Index j = 0; j < g.m; ++j) {
      f(j) = rng.normal();
      h(j) = rng.normal();
    }
    double lhs = (ctx.SC * f).cwiseProduct(g.weights).dot(h);
    double rhs = f.cwiseProduct(g.weights).dot(ctx.CS * h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("stein kernel at the origin recovers Tr(SC^2)") {
  // Gaussian target, T = I, gamma = 1, x = y = 0: all data terms vanish
  // and the SE/IMQ values both reduce to Tr(C^2) = 1/6 for Brownian C.
  for (auto family : {KernelFamily::SE, KernelFamily::IMQ}) {
    SteinContext ctx = bm_context(512, family);
    auto zero = sample_from_fn(ctx.target.grid, [](double) { return 0.0; });
    double h = stein_kernel(ctx, zero, zero);
    CHECK(std::abs(h - 1.0 / 6.0) < 5e-3);
  }
}

TEST_CASE("stein kernel is symmetric") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  for (auto family : {KernelFamily::SE, KernelFamily::IMQ}) {
    SteinContext ctx =
        make_stein_context(brownian_motion_target(g), KernelConfig{family, std::nullopt, 0.9});
    auto xs = bm_samples(g, 6, 41);
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        double a = stein_kernel(ctx, xs[i], xs[j]);
        double b = stein_kernel(ctx, xs[j], xs[i]);
        CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
      }
  }
  // also for the Gibbs target
  Grid gb = make_uniform_grid(0.0, 50.0, 65);
  SteinContext gctx = make_stein_context(sine_gibbs_target(gb),
                                         KernelConfig{KernelFamily::SE, std::nullopt, 5.0});
  Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    FunctionSample x = sample_bm(gb, rng);
    FunctionSample y = sample_bm(gb, rng);
    double a = stein_kernel(gctx, x, y);
    CHECK(std::abs(a - stein_kernel(gctx, y, x)) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("gram matrix agrees with the scalar kernel and is PSD") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  for (auto family : {KernelFamily::SE, KernelFamily::IMQ}) {
    SteinContext ctx =
        make_stein_context(brownian_motion_target(g), KernelConfig{family, std::nullopt, 1.3});
    auto xs = bm_samples(g, 20, 47);
    SteinGram gram = build_gram(ctx, xs);
    double scale = gram.entries.cwiseAbs().maxCoeff();
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        CHECK(std::abs(gram.entries(i, j) - stein_kernel(ctx, xs[i], xs[j])) <= 1e-9 * scale);
        CHECK(gram.entries(i, j) == gram.entries(j, i));
      }
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram.entries);
    CHECK(es.eigenvalues().minCoeff() >= -1e-6 * es.eigenvalues().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("gram PSD at n = 50") {
  SteinContext ctx = bm_context(100, KernelFamily::SE);
  auto xs = bm_samples(ctx.target.grid, 50, 53);
  SteinGram gram = build_gram(ctx, xs);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram.entries);
  CHECK(es.eigenvalues().minCoeff() >= -1e-6 * es.eigenvalues().cwiseAbs().maxCoeff());
}

TEST_CASE("u and v statistics") {
  SteinContext ctx = bm_context(100, KernelFamily::SE);
  const Grid& g = ctx.target.grid;
  auto xs = bm_samples(g, 2, 59);
  SteinGram g2 = build_gram(ctx, xs);
  CHECK(u_statistic(g2) == doctest::Approx(g2.entries(0, 1)).epsilon(1e-12));

  // duplicate sample list gives a constant matrix, u = v = that constant
  std::vector<FunctionSample> dup{xs[0], xs[0], xs[0]};
  SteinGram gd = build_gram(ctx, dup);
  double hxx = gd.entries(0, 0);
  CHECK((gd.entries.array() - hxx).abs().maxCoeff() <= 1e-9 * std::abs(hxx));
  CHECK(u_statistic(gd) == doctest::Approx(hxx).epsilon(1e-9));
  CHECK(v_statistic(gd) == doctest::Approx(hxx).epsilon(1e-9));

  // n = 1: v = h(x,x) >= 0
  std::vector<FunctionSample> one{xs[0]};
  SteinGram g1 = build_gram(ctx, one);
  CHECK(v_statistic(g1) == doctest::Approx(g1.entries(0, 0)));
  CHECK(v_statistic(g1) >= 0.0);
  CHECK_THROWS_AS(u_statistic(g1), std::invalid_argument);

  // v-statistic nonnegativity on a larger sample
  auto xl = bm_samples(g, 40, 61);
  SteinGram gl = build_gram(ctx, xl);
  CHECK(v_statistic(gl) >= -1e-8 * gl.entries.cwiseAbs().maxCoeff());
}

TEST_CASE("u statistic is unbiased under the null") {
  // oracle: over seeded replications of n = 500 null samples the mean of the
  // u-statistic is 0 within 3 standard errors
  SteinContext ctx = bm_context(100, KernelFamily::SE, 1.0);
  const Grid& g = ctx.target.grid;
  const int reps = 50;
  std::vector<double> stats(reps);
  for (int r = 0; r < reps; ++r) {
    auto xs = bm_samples(g, 500, 1000 + r);
    stats[r] = u_statistic(build_gram(ctx, xs));
  }
  double mean = 0.0, var = 0.0;
  for (double s : stats) mean += s;
  mean /= reps;
  for (double s : stats) var += (s - mean) * (s - mean);
  var /= (reps - 1);
  CHECK(std::abs(mean) <= 3.0 * std::sqrt(var / reps));
}

TEST_CASE("statistics are permutation invariant") {
  SteinContext ctx = bm_context(100, KernelFamily::IMQ);
  auto xs = bm_samples(ctx.target.grid, 15, 67);
  double u0 = u_statistic(build_gram(ctx, xs));
  double v0 = v_statistic(build_gram(ctx, xs));
  std::reverse(xs.begin(), xs.end());
  std::swap(xs[3], xs[11]);
  CHECK(u_statistic(build_gram(ctx, xs)) == doctest::Approx(u0).epsilon(1e-12));
  CHECK(v_statistic(build_gram(ctx, xs)) == doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("Gibbs target with zero potential reduces to the Gaussian bit-for-bit") {
  Grid g = make_uniform_grid(0.0, 50.0, 65);
  Target gauss = brownian_bridge_target(g, 50.0);
  Target trivial_gibbs = brownian_bridge_target(g, 50.0);
  trivial_gibbs.du_pointwise = [](double) { return 0.0; };

  KernelConfig cfg{KernelFamily::SE, std::nullopt, 3.0};
  SteinContext cg = make_stein_context(gauss, cfg);
  SteinContext ct = make_stein_context(trivial_gibbs, cfg);

  Rng rng(71);
  auto xs = std::vector<FunctionSample>{};
  for (int i = 0; i < 8; ++i) xs.push_back(sample_bm(g, rng));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK(stein_kernel(cg, xs[i], xs[j]) == stein_kernel(ct, xs[i], xs[j]));
  SteinGram a = build_gram(cg, xs), b = build_gram(ct, xs);
  CHECK((a.entries.array() == b.entries.array()).all());
}

TEST_CASE("bandwidth folds into the operator") {
  Grid g = make_uniform_grid(0.0, 1.0, 100);
  Target bm = brownian_motion_target(g, 60);
  auto t2 = t2_whitening(bm.eigensystem, 50);
  double gamma = 17.0;
  for (auto family : {KernelFamily::SE, KernelFamily::IMQ}) {
    SteinContext a = make_stein_context(bm, KernelConfig{family, t2, gamma});
    GridOperator scaled{g, t2.matrix / gamma};
    SteinContext b = make_stein_context(bm, KernelConfig{family, scaled, 1.0});
    Rng rng(73);
    for (int trial = 0; trial < 5; ++trial) {
      FunctionSample x = sample_bm(g, rng);
      FunctionSample y = sample_bm(g, rng);
      double ha = stein_kernel(a, x, y);
      double hb = stein_kernel(b, x, y);
      CHECK(std::abs(ha - hb) <= 1e-10 * std::max(1.0, std::abs(ha)));
    }
  }
}
