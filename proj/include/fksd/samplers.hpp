#pragma once

#include "fksd/fn_space.hpp"
#include "fksd/rng.hpp"

namespace fksd {

struct AcceptanceFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brownian motion on the grid: exact Gaussian increments, X(a) = 0.
FunctionSample sample_bm(const Grid& grid, Rng& rng);

// Karhunen-Loeve truncation: sum_{i<=n_freq} sqrt(lambda_i) xi_i e_i.
FunctionSample sample_clipped_bm(const Grid& grid, const EigenSystem& eigsys,
                                 int n_freq, Rng& rng);

// dX = theta (mu - X) dt + dB via Euler-Maruyama on a fine grid, then
// linearly interpolated to `grid`.
FunctionSample sample_ou(const Grid& grid, Rng& rng, double theta = 0.5, double mu = 5.0,
                         double x0 = 0.0, int em_steps = 1000);

// Brownian motion scaled pointwise by scale_fn(t).
FunctionSample sample_scaled(const Grid& grid, const std::function<double(double)>& scale_fn,
                             Rng& rng);

// Brownian motion plus the deterministic shift 1.5 t (t - 1).
FunctionSample sample_mean_shift(const Grid& grid, Rng& rng);

// Piecewise-linear interpolation of `path` at the points of `out_grid`.
FunctionSample interpolate_linear(const FunctionSample& path, const Grid& out_grid);

// dX = 0.7 sin(X) dt + dB on [0, b] via Euler-Maruyama with `em_steps` steps,
// accept/reject on |X(b)| < eps, interpolated to `out_grid`, plus the drift
// deviation delta * t / b.
FunctionSample sample_conditioned_sde(const Grid& out_grid, int em_steps, Rng& rng,
                                      double eps = 0.1, double delta = 0.0,
                                      long max_attempts = 1000000);

}  // namespace fksd
