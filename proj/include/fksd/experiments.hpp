#pragma once

#include "fksd/gof.hpp"
#include "fksd/samplers.hpp"

namespace fksd {

// The seven Brownian-motion-target candidate measures plus the conditioned
// SDE study, wired into power_study cells.
enum class Experiment { Exp1, Exp2, Exp3, Exp4, Exp5, Exp6, Exp7 };
enum class TChoice { T1, T2 };

int default_sample_count(Experiment exp);

struct BmCell {
  Experiment experiment{Experiment::Exp1};
  KernelFamily family{KernelFamily::SE};
  TChoice t_choice{TChoice::T1};
  int n_samples{0};  // 0 means the experiment default
  int grid_m{100};
};

// One Table 1/2 cell: Brownian motion target on [0,1], median-heuristic
// bandwidth per repetition.
std::vector<RepetitionRecord> run_bm_cell(const BmCell& cell, const TestConfig& cfg,
                                          int repetitions, std::uint64_t seed,
                                          int n_threads = 0);

struct GibbsCell {
  KernelFamily family{KernelFamily::SE};
  TChoice t_choice{TChoice::T1};
  double delta{0.0};
  int n_samples{100};
  int grid_m{129};
  int em_steps{1024};  // null sampler resolution
  double eps{0.1};
};

// One Table 3 cell: conditioned-SDE Gibbs target on [0,50]; samples come from
// fine-grid Euler-Maruyama with accept/reject plus the delta drift deviation.
std::vector<RepetitionRecord> run_gibbs_cell(const GibbsCell& cell, const TestConfig& cfg,
                                             int repetitions, std::uint64_t seed,
                                             int n_threads = 0);

struct EmStudyPoint {
  int em_steps{0};
  double v_stat{0.0};
  double gamma{0.0};
};

// Discretisation study: V-statistic KSD of coarse Euler-Maruyama simulations
// of the conditioned SDE against the Gibbs target, IMQ kernel, fixed gamma.
std::vector<EmStudyPoint> run_em_study(const std::vector<int>& step_counts, int n_samples,
                                       TChoice t_choice, double gamma, int grid_m,
                                       std::uint64_t seed, int n_threads = 0);

}  // namespace fksd
