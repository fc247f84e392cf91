#pragma once

#include "fksd/fn_space.hpp"

namespace fksd {

// Target measure P on L^2([a,b]): a centred Gaussian N_C, optionally tilted
// by a Gibbs potential U with pointwise-acting derivative DU(x)(t) = phi(x(t)).
struct Target {
  Grid grid;
  std::function<double(double, double)> covariance;
  GridOperator C;
  EigenSystem eigensystem;
  std::function<double(double)> du_pointwise;            // empty for Gaussian targets
  std::function<double(const FunctionSample&)> potential;  // diagnostics only

  bool is_gibbs() const { return bool(du_pointwise); }
};

// Brownian motion on [0,1]: c(s,t) = min(s,t),
// lambda_i = (i-0.5)^-2 pi^-2, e_i(t) = sqrt(2) sin((i-0.5) pi t).
Target brownian_motion_target(const Grid& grid, int n_modes = 200);

// Brownian bridge on [0,horizon]: c(s,t) = min(s,t) - st/horizon,
// lambda_i = (horizon/(i pi))^2, e_i(t) = sqrt(2/horizon) sin(i pi t / horizon).
Target brownian_bridge_target(const Grid& grid, double horizon, int n_modes = 200);

// Conditioned sine-drift SDE on [0,50] as a Gibbs tilt of the Brownian bridge:
// DU(x) = 0.49 sin(x) cos(x) - 0.35 sin(x),
// U(x) = 1/2 int 0.49 sin(x)^2 + 0.7 cos(x).
Target sine_gibbs_target(const Grid& grid, int n_modes = 200);

// C DU(x); the zero function for Gaussian targets.
FunctionSample cdu(const Target& target, const FunctionSample& x);

// x + C DU(x); identity for Gaussian targets.
FunctionSample drift(const Target& target, const FunctionSample& x);

}  // namespace fksd
