#pragma once

#include <optional>
#include <vector>

#include "fksd/fn_space.hpp"

namespace fksd {

struct DegenerateBandwidthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KernelFamily { SE, IMQ };

// SE:  exp(-|Tx - Ty|^2 / (2 gamma^2))
// IMQ: (gamma^-2 |Tx - Ty|^2 + 1)^(-1/2)
// T empty means the identity operator.
struct KernelConfig {
  KernelFamily family{KernelFamily::SE};
  std::optional<GridOperator> T;
  double gamma{1.0};
};

double kernel_eval(const KernelConfig& cfg, const FunctionSample& x,
                   const FunctionSample& y);

// Median of |T X_i - T X_j| over unordered pairs i < j; even counts take the
// mean of the two middle order statistics. Throws on a zero median.
double median_bandwidth(const std::vector<FunctionSample>& samples,
                        const std::optional<GridOperator>& T);

// Multiplies the first `cutoff` eigendirections by lambda_i^-1, identity beyond.
GridOperator t2_whitening(const EigenSystem& eigsys, int cutoff);

}  // namespace fksd
