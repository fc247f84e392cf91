#pragma once

#include <vector>

#include "fksd/kernels.hpp"
#include "fksd/targets.hpp"

namespace fksd {

// Precomputed pieces of the closed-form Stein kernels: S = gamma^-2 T*T,
// SC, CS and Tr(SC^2). Immutable after construction, shareable.
struct SteinContext {
  Target target;
  KernelConfig kernel;
  Matrix S;
  Matrix SC;
  Matrix CS;
  double trace_SC2{0.0};
};

SteinContext make_stein_context(Target target, KernelConfig kernel);

// Closed-form Stein kernel h_v(x, y) for the configured family.
// SE:  k (<bx,by> - <SCd,d> - <SC(cx-cy),d> + Tr(SC^2) - |CSd|^2)
// IMQ: k <bx,by> + k^3 (Tr(SC^2) - <SCd,d> - <SC(cx-cy),d>) - 3 k^5 |CSd|^2
// with d = x - y, cx = CDU(x), bx = x + cx.
double stein_kernel(const SteinContext& ctx, const FunctionSample& x,
                    const FunctionSample& y);

struct SteinGram {
  Matrix entries;  // n x n, symmetric
  Eigen::Index n() const { return entries.rows(); }
};

SteinGram build_gram(const SteinContext& ctx, const std::vector<FunctionSample>& samples);

// Unbiased off-diagonal mean, 1/(n(n-1)) sum_{i != j} h_ij.
double u_statistic(const SteinGram& gram);

// Biased nonnegative full mean, 1/n^2 sum_{i,j} h_ij.
double v_statistic(const SteinGram& gram);

}  // namespace fksd
