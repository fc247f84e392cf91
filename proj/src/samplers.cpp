#include "fksd/samplers.hpp"

#include <algorithm>
#include <cmath>

namespace fksd {

FunctionSample sample_bm(const Grid& grid, Rng& rng) {
  Vector v(grid.m);
  v(0) = 0.0;
  for (Eigen::Index i = 1; i < grid.m; ++i) {
    double dt = grid.points(i) - grid.points(i - 1);
    v(i) = v(i - 1) + std::sqrt(dt) * rng.normal();
  }
  return FunctionSample{grid, std::move(v)};
}

FunctionSample sample_clipped_bm(const Grid& grid, const EigenSystem& eigsys,
                                 int n_freq, Rng& rng) {
  if (n_freq > eigsys.count())
    throw std::invalid_argument("sample_clipped_bm: n_freq exceeds eigensystem size");
  require_same_grid(grid, eigsys.grid, "sample_clipped_bm");
  Vector v = Vector::Zero(grid.m);
  for (int i = 0; i < n_freq; ++i)
    v += std::sqrt(eigsys.eigenvalues(i)) * rng.normal() * eigsys.basis.col(i);
  return FunctionSample{grid, std::move(v)};
}

FunctionSample sample_ou(const Grid& grid, Rng& rng, double theta, double mu, double x0,
                         int em_steps) {
  Grid sim = make_uniform_grid(grid.a, grid.b, em_steps + 1);
  double dt = (grid.b - grid.a) / double(em_steps);
  double sdt = std::sqrt(dt);
  Vector v(sim.m);
  v(0) = x0;
  for (Eigen::Index i = 1; i < sim.m; ++i)
    v(i) = v(i - 1) + theta * (mu - v(i - 1)) * dt + sdt * rng.normal();
  return interpolate_linear(FunctionSample{sim, std::move(v)}, grid);
}

FunctionSample sample_scaled(const Grid& grid, const std::function<double(double)>& scale_fn,
                             Rng& rng) {
  FunctionSample s = sample_bm(grid, rng);
  for (Eigen::Index i = 0; i < grid.m; ++i) s.values(i) *= scale_fn(grid.points(i));
  return s;
}

FunctionSample sample_mean_shift(const Grid& grid, Rng& rng) {
  FunctionSample s = sample_bm(grid, rng);
  for (Eigen::Index i = 0; i < grid.m; ++i) {
    double t = grid.points(i);
    s.values(i) += 1.5 * t * (t - 1.0);
  }
  return s;
}

FunctionSample interpolate_linear(const FunctionSample& path, const Grid& out_grid) {
  const Grid& in = path.grid;
  if (out_grid.a < in.a - 1e-12 || out_grid.b > in.b + 1e-12)
    throw std::invalid_argument("interpolate_linear: output grid outside path span");
  Vector v(out_grid.m);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < out_grid.m; ++i) {
    double t = out_grid.points(i);
    while (k + 2 < in.m && in.points(k + 1) < t) ++k;
    double t0 = in.points(k), t1 = in.points(k + 1);
    double frac = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
    v(i) = path.values(k) + frac * (path.values(k + 1) - path.values(k));
  }
  return FunctionSample{out_grid, std::move(v)};
}

FunctionSample sample_conditioned_sde(const Grid& out_grid, int em_steps, Rng& rng,
                                      double eps, double delta, long max_attempts) {
  if (em_steps < 2) throw std::invalid_argument("sample_conditioned_sde: em_steps < 2");
  const double horizon = out_grid.b;
  Grid sim = make_uniform_grid(out_grid.a, horizon, em_steps + 1);
  double dt = horizon / double(em_steps);
  double sdt = std::sqrt(dt);
  Vector v(sim.m);
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    v(0) = 0.0;
    for (Eigen::Index i = 1; i < sim.m; ++i)
      v(i) = v(i - 1) + 0.7 * std::sin(v(i - 1)) * dt + sdt * rng.normal();
    if (std::abs(v(sim.m - 1)) < eps) {
      FunctionSample out = interpolate_linear(FunctionSample{sim, v}, out_grid);
      if (delta != 0.0)
        for (Eigen::Index i = 0; i < out_grid.m; ++i)
          out.values(i) += delta * out_grid.points(i) / horizon;
      return out;
    }
  }
  throw AcceptanceFailureError("sample_conditioned_sde: attempt cap exceeded");
}

}  // namespace fksd
