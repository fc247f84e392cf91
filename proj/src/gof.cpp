#include "fksd/gof.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace fksd {

std::vector<int> multinomial_weights(int n, Rng& rng) {
  std::vector<int> w(n, 0);
  for (int i = 0; i < n; ++i) ++w[rng.uniform_int(std::uint64_t(n))];
  return w;
}

double bootstrap_replicate(const SteinGram& gram, const std::vector<int>& weights) {
  const Eigen::Index n = gram.n();
  if (Eigen::Index(weights.size()) != n)
    throw std::invalid_argument("bootstrap_replicate: weight count mismatch");
  long sum = 0;
  for (int w : weights) {
    if (w < 0) throw std::invalid_argument("bootstrap_replicate: negative weight");
    sum += w;
  }
  if (sum != long(n)) throw std::invalid_argument("bootstrap_replicate: weights must sum to n");
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = double(weights[i]) - 1.0;
  double full = v.dot(gram.entries * v);
  double diag = gram.entries.diagonal().dot(v.cwiseProduct(v));
  return (full - diag) / (double(n) * double(n));
}

TestResult run_test(const std::vector<FunctionSample>& samples, const SteinContext& ctx,
                    const TestConfig& cfg) {
  if (samples.size() < 2) throw std::invalid_argument("run_test: need n >= 2 samples");
  if (cfg.n_bootstrap < 1) throw std::invalid_argument("run_test: n_bootstrap < 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("run_test: alpha must be in (0,1)");

  SteinGram gram = build_gram(ctx, samples);
  TestResult res;
  res.statistic = u_statistic(gram);
  res.gamma_used = ctx.kernel.gamma;
  res.replicates.resize(cfg.n_bootstrap);
  Rng rng(cfg.seed);
  const int n = int(samples.size());
  for (int b = 0; b < cfg.n_bootstrap; ++b) {
    auto w = multinomial_weights(n, rng);
    res.replicates[b] = bootstrap_replicate(gram, w);
  }
  std::vector<double> sorted = res.replicates;
  std::sort(sorted.begin(), sorted.end());
  int rank = int(std::ceil((1.0 - cfg.alpha) * cfg.n_bootstrap));
  rank = std::clamp(rank, 1, cfg.n_bootstrap);
  res.threshold = sorted[rank - 1];
  res.reject = res.statistic > res.threshold;
  return res;
}

std::vector<RepetitionRecord> power_study(const PowerStudy& study, const TestConfig& cfg,
                                          int repetitions, std::uint64_t seed,
                                          int n_threads) {
  if (repetitions < 1) throw std::invalid_argument("power_study: repetitions < 1");
  if (n_threads <= 0) n_threads = int(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, repetitions);

  std::vector<RepetitionRecord> records(repetitions);
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&](int begin, int end) {
    for (int r = begin; r < end; ++r) {
      try {
        Rng rng = Rng::substream(seed, std::uint64_t(r));
        auto samples = study.sampler(rng);
        SteinContext ctx = study.context_builder(samples);
        TestConfig rep_cfg = cfg;
        rep_cfg.seed = rng.next_u64();
        TestResult t = run_test(samples, ctx, rep_cfg);
        records[r] = RepetitionRecord{t.statistic, t.threshold, t.gamma_used, t.reject};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (n_threads == 1) {
    worker(0, repetitions);
  } else {
    std::vector<std::thread> threads;
    int chunk = (repetitions + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      int begin = t * chunk;
      int end = std::min(repetitions, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(worker, begin, end);
    }
    for (auto& th : threads) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

double rejection_rate(const std::vector<RepetitionRecord>& records) {
  if (records.empty()) return 0.0;
  int count = 0;
  for (const auto& r : records) count += r.reject ? 1 : 0;
  return double(count) / double(records.size());
}

}  // namespace fksd
