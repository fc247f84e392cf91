#include "fksd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace fksd {

double kernel_eval(const KernelConfig& cfg, const FunctionSample& x,
                   const FunctionSample& y) {
  require_same_grid(x.grid, y.grid, "kernel_eval");
  Vector d = x.values - y.values;
  if (cfg.T) {
    require_same_grid(cfg.T->grid, x.grid, "kernel_eval");
    d = cfg.T->matrix * d;
  }
  double sq = d.cwiseProduct(x.grid.weights).dot(d) / (cfg.gamma * cfg.gamma);
  sq = std::max(sq, 0.0);
  if (cfg.family == KernelFamily::SE) return std::exp(-0.5 * sq);
  return 1.0 / std::sqrt(sq + 1.0);
}

double median_bandwidth(const std::vector<FunctionSample>& samples,
                        const std::optional<GridOperator>& T) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("median_bandwidth: need at least 2 samples");
  const Grid& g = samples[0].grid;
  std::vector<Vector> tx(n);
  for (std::size_t i = 0; i < n; ++i) {
    require_same_grid(samples[i].grid, g, "median_bandwidth");
    tx[i] = T ? Vector(T->matrix * samples[i].values) : samples[i].values;
  }
  std::vector<double> dist;
  dist.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Vector d = tx[i] - tx[j];
      dist.push_back(std::sqrt(std::max(d.cwiseProduct(g.weights).dot(d), 0.0)));
    }
  std::sort(dist.begin(), dist.end());
  const std::size_t k = dist.size();
  double med = (k % 2 == 1) ? dist[k / 2] : 0.5 * (dist[k / 2 - 1] + dist[k / 2]);
  if (med == 0.0)
    throw DegenerateBandwidthError("median_bandwidth: zero median pairwise distance");
  return med;
}

GridOperator t2_whitening(const EigenSystem& eigsys, int cutoff) {
  if (cutoff < 0 || cutoff > eigsys.count())
    throw std::invalid_argument("t2_whitening: cutoff exceeds eigensystem size");
  Vector mult(cutoff);
  for (int i = 0; i < cutoff; ++i) mult(i) = 1.0 / eigsys.eigenvalues(i);
  return rank_update_operator(eigsys, mult);
}

}  // namespace fksd
