#include "fksd/experiments.hpp"

#include <cmath>
#include <numeric>
#include <numbers>
#include <thread>

namespace fksd {

namespace {

std::optional<GridOperator> make_t_operator(const Target& target, TChoice choice) {
  if (choice == TChoice::T1) return std::nullopt;
  return t2_whitening(target.eigensystem, 50);
}

std::function<FunctionSample(Rng&)> bm_experiment_sampler(Experiment exp, const Grid& grid,
                                                          const EigenSystem& eigsys) {
  using std::numbers::pi;
  switch (exp) {
    case Experiment::Exp1:
      return [grid](Rng& rng) { return sample_bm(grid, rng); };
    case Experiment::Exp2:
      return [grid, eigsys](Rng& rng) { return sample_clipped_bm(grid, eigsys, 5, rng); };
    case Experiment::Exp3:
      return [grid](Rng& rng) { return sample_ou(grid, rng); };
    case Experiment::Exp4:
      return [grid](Rng& rng) {
        return sample_scaled(grid, [](double t) { return 1.0 + t * t; }, rng);
      };
    case Experiment::Exp5:
      return [grid](Rng& rng) {
        return sample_scaled(grid, [](double t) { return 1.0 + std::sin(2.0 * pi * t); }, rng);
      };
    case Experiment::Exp6:
      return [grid](Rng& rng) { return sample_scaled(grid, [](double) { return 2.0; }, rng); };
    case Experiment::Exp7:
      return [grid](Rng& rng) { return sample_mean_shift(grid, rng); };
  }
  throw std::invalid_argument("bm_experiment_sampler: unknown experiment");
}

}  // namespace

int default_sample_count(Experiment exp) {
  switch (exp) {
    case Experiment::Exp1:
    case Experiment::Exp2:
    case Experiment::Exp4:
    case Experiment::Exp5: return 50;
    case Experiment::Exp3:
    case Experiment::Exp6:
    case Experiment::Exp7: return 25;
  }
  throw std::invalid_argument("default_sample_count: unknown experiment");
}

std::vector<RepetitionRecord> run_bm_cell(const BmCell& cell, const TestConfig& cfg,
                                          int repetitions, std::uint64_t seed,
                                          int n_threads) {
  Grid grid = make_uniform_grid(0.0, 1.0, cell.grid_m);
  Target target = brownian_motion_target(grid);
  auto t_op = make_t_operator(target, cell.t_choice);
  int n = cell.n_samples > 0 ? cell.n_samples : default_sample_count(cell.experiment);
  auto draw = bm_experiment_sampler(cell.experiment, grid, target.eigensystem);

  PowerStudy study;
  study.sampler = [draw, n](Rng& rng) {
    std::vector<FunctionSample> xs;
    xs.reserve(n);
    for (int i = 0; i < n; ++i) xs.push_back(draw(rng));
    return xs;
  };
  study.context_builder = [target, t_op, family = cell.family](
                              const std::vector<FunctionSample>& xs) {
    double gamma = median_bandwidth(xs, t_op);
    return make_stein_context(target, KernelConfig{family, t_op, gamma});
  };
  return power_study(study, cfg, repetitions, seed, n_threads);
}

std::vector<RepetitionRecord> run_gibbs_cell(const GibbsCell& cell, const TestConfig& cfg,
                                             int repetitions, std::uint64_t seed,
                                             int n_threads) {
  Grid grid = make_uniform_grid(0.0, 50.0, cell.grid_m);
  Target target = sine_gibbs_target(grid);
  auto t_op = make_t_operator(target, cell.t_choice);

  PowerStudy study;
  study.sampler = [grid, cell](Rng& rng) {
    std::vector<FunctionSample> xs;
    xs.reserve(cell.n_samples);
    for (int i = 0; i < cell.n_samples; ++i)
      xs.push_back(sample_conditioned_sde(grid, cell.em_steps, rng, cell.eps, cell.delta));
    return xs;
  };
  study.context_builder = [target, t_op, family = cell.family](
                              const std::vector<FunctionSample>& xs) {
    double gamma = median_bandwidth(xs, t_op);
    return make_stein_context(target, KernelConfig{family, t_op, gamma});
  };
  return power_study(study, cfg, repetitions, seed, n_threads);
}

namespace {

// The discretisation study couples all step counts through common random
// numbers: per sample index we scan attempts of a fine-resolution EM run and
// accept on the fine endpoint, then every coarse step count re-reads the
// accepted attempt's noise as block sums. Each cell then sees the same
// conditioned noise ensemble at a different resolution, so adjacent cells
// differ by discretisation error rather than by independent sampling noise.
Rng attempt_stream(std::uint64_t seed, int sample_index, std::uint64_t attempt) {
  return Rng::substream(seed, (std::uint64_t(sample_index) << 20) + attempt);
}

std::uint64_t find_accepted_attempt(double span, int fine, std::uint64_t seed,
                                    int sample_index, double eps) {
  double dt = span / fine, sdt = std::sqrt(dt);
  const std::uint64_t max_attempts = 1000000;
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng = attempt_stream(seed, sample_index, attempt);
    double v = 0.0;
    for (int j = 0; j < fine; ++j) v += 0.7 * std::sin(v) * dt + sdt * rng.normal();
    if (std::abs(v) < eps) return attempt;
  }
  throw AcceptanceFailureError("run_em_study: no acceptance in 1e6 attempts");
}

FunctionSample coarse_em_path(const Grid& grid, int steps, int fine, std::uint64_t seed,
                              int sample_index, std::uint64_t attempt) {
  double span = grid.b - grid.a;
  double dt = span / steps, dt_fine = span / fine, sdt_fine = std::sqrt(dt_fine);
  int block = fine / steps;
  Rng rng = attempt_stream(seed, sample_index, attempt);
  Vector path(steps + 1);
  path(0) = 0.0;
  double v = 0.0;
  for (int j = 0; j < steps; ++j) {
    double dw = 0.0;
    for (int k = 0; k < block; ++k) dw += sdt_fine * rng.normal();
    v += 0.7 * std::sin(v) * dt + dw;
    path(j + 1) = v;
  }
  Grid coarse = make_uniform_grid(grid.a, grid.b, steps + 1);
  return interpolate_linear(make_sample(coarse, path), grid);
}

void parallel_for(int n, int n_threads, const std::function<void(int, int)>& body) {
  int workers = std::max(1, std::min(n_threads, n));
  std::vector<std::thread> threads;
  int chunk = (n + workers - 1) / workers;
  for (int t = 0; t < workers; ++t) {
    int begin = t * chunk;
    int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(body, begin, end);
  }
  for (auto& th : threads) th.join();
}

}  // namespace

std::vector<EmStudyPoint> run_em_study(const std::vector<int>& step_counts, int n_samples,
                                       TChoice t_choice, double gamma, int grid_m,
                                       std::uint64_t seed, int n_threads) {
  if (n_samples < 1) throw std::invalid_argument("run_em_study: n_samples < 1");
  for (int s : step_counts)
    if (s < 2) throw std::invalid_argument("run_em_study: step counts must be >= 2");
  Grid grid = make_uniform_grid(0.0, 50.0, grid_m);
  Target target = sine_gibbs_target(grid);
  auto t_op = make_t_operator(target, t_choice);
  SteinContext ctx =
      make_stein_context(target, KernelConfig{KernelFamily::IMQ, t_op, gamma});

  // common fine resolution: every step count divides it
  long long fine = 1;
  for (int s : step_counts) fine = std::lcm(fine, (long long)s);
  if (fine > 100000)
    throw std::invalid_argument("run_em_study: step counts have lcm > 1e5");

  if (n_threads <= 0) n_threads = int(std::thread::hardware_concurrency());
  n_threads = std::max(n_threads, 1);

  // acceptance is decided once per sample on the fine path
  std::vector<std::uint64_t> accepted(n_samples);
  parallel_for(n_samples, n_threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i)
      accepted[i] = find_accepted_attempt(grid.b - grid.a, int(fine), seed, i, 0.1);
  });

  std::vector<EmStudyPoint> out;
  for (int steps : step_counts) {
    std::vector<FunctionSample> xs(n_samples,
                                   FunctionSample{grid, Vector::Zero(grid.m)});
    parallel_for(n_samples, n_threads, [&](int begin, int end) {
      for (int i = begin; i < end; ++i)
        xs[i] = coarse_em_path(grid, steps, int(fine), seed, i, accepted[i]);
    });
    SteinGram gram = build_gram(ctx, xs);
    out.push_back({steps, v_statistic(gram), gamma});
  }
  return out;
}

}  // namespace fksd
