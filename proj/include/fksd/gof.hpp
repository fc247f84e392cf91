#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fksd/rng.hpp"
#include "fksd/stein.hpp"

namespace fksd {

struct TestConfig {
  int n_bootstrap{2000};
  double alpha{0.05};
  std::uint64_t seed{0};
};

struct TestResult {
  double statistic{0.0};
  std::vector<double> replicates;
  double threshold{0.0};
  bool reject{false};
  double gamma_used{0.0};
};

// Multinomial(n; 1/n, ..., 1/n) counts via n categorical draws.
std::vector<int> multinomial_weights(int n, Rng& rng);

// 1/n^2 sum_{i != j} (w_i - 1)(w_j - 1) h_ij.
double bootstrap_replicate(const SteinGram& gram, const std::vector<int>& weights);

// U-statistic test with multinomial-bootstrap calibration. Threshold is the
// 1-based order statistic at ceil((1-alpha) B) of the sorted replicates.
TestResult run_test(const std::vector<FunctionSample>& samples, const SteinContext& ctx,
                    const TestConfig& cfg);

struct RepetitionRecord {
  double statistic{0.0};
  double threshold{0.0};
  double gamma{0.0};
  bool reject{false};
};

// One power-study cell: `sampler` draws a fresh sample set per repetition and
// `context_builder` applies the median heuristic to it. Repetition r uses RNG
// substream (seed, r); repetitions run in parallel and results are slotted by
// index, so the output is independent of the schedule.
struct PowerStudy {
  std::function<std::vector<FunctionSample>(Rng&)> sampler;
  std::function<SteinContext(const std::vector<FunctionSample>&)> context_builder;
};

std::vector<RepetitionRecord> power_study(const PowerStudy& study, const TestConfig& cfg,
                                          int repetitions, std::uint64_t seed,
                                          int n_threads = 0);

double rejection_rate(const std::vector<RepetitionRecord>& records);

}  // namespace fksd
