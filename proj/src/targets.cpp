#include "fksd/targets.hpp"

#include <cmath>
#include <numbers>

namespace fksd {

namespace {
constexpr double kPi = std::numbers::pi;
}

Target brownian_motion_target(const Grid& grid, int n_modes) {
  Target t;
  t.grid = grid;
  t.covariance = [](double s, double u) { return std::min(s, u); };
  t.C = integral_operator(t.covariance, grid);
  t.eigensystem = make_eigensystem(
      grid, [](int i) { return 1.0 / ((i - 0.5) * (i - 0.5) * kPi * kPi); },
      [](int i, double x) { return std::sqrt(2.0) * std::sin((i - 0.5) * kPi * x); },
      n_modes);
  return t;
}

Target brownian_bridge_target(const Grid& grid, double horizon, int n_modes) {
  Target t;
  t.grid = grid;
  t.covariance = [horizon](double s, double u) { return std::min(s, u) - s * u / horizon; };
  t.C = integral_operator(t.covariance, grid);
  t.eigensystem = make_eigensystem(
      grid,
      [horizon](int i) {
        double v = horizon / (i * kPi);
        return v * v;
      },
      [horizon](int i, double x) {
        return std::sqrt(2.0 / horizon) * std::sin(i * kPi * x / horizon);
      },
      n_modes);
  return t;
}

Target sine_gibbs_target(const Grid& grid, int n_modes) {
  Target t = brownian_bridge_target(grid, grid.b, n_modes);
  t.du_pointwise = [](double v) { return 0.49 * std::sin(v) * std::cos(v) - 0.35 * std::sin(v); };
  t.potential = [](const FunctionSample& x) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.grid.m; ++i) {
      double v = x.values(i);
      double s = std::sin(v);
      acc += x.grid.weights(i) * (0.49 * s * s + 0.7 * std::cos(v));
    }
    return 0.5 * acc;
  };
  return t;
}

FunctionSample cdu(const Target& target, const FunctionSample& x) {
  require_same_grid(target.grid, x.grid, "cdu");
  if (!target.is_gibbs())
    return FunctionSample{x.grid, Vector::Zero(x.grid.m)};
  Vector du = x.values.unaryExpr(target.du_pointwise);
  return FunctionSample{x.grid, target.C.matrix * du};
}

FunctionSample drift(const Target& target, const FunctionSample& x) {
  require_same_grid(target.grid, x.grid, "drift");
  if (!target.is_gibbs()) return x;
  FunctionSample c = cdu(target, x);
  return FunctionSample{x.grid, x.values + c.values};
}

}  // namespace fksd
