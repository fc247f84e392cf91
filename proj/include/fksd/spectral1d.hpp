#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fksd/kernels.hpp"
#include "fksd/rng.hpp"

namespace fksd {

// Finite-dimensional (d = 1) oracle: direct Monte Carlo evaluation of the
// spectral form of KSD, cross-checked against the closed-form Stein kernel.
struct ScalarModel {
  std::function<double(double)> score;  // (log p)'
  std::string label;
};

enum class SpectralFamily { Gaussian, StudentT2, Cauchy };

double spectral_draw(SpectralFamily family, Rng& rng);

// Langevin-Stein action on the complex exponential e^{isx}:
// -s^2 cos(sx) - s sin(sx) score(x) + i (-s^2 sin(sx) + s cos(sx) score(x)).
std::complex<double> test_function(double s, double x, const ScalarModel& model);

struct SpectralEstimate {
  double value{0.0};
  double std_error{0.0};  // Monte Carlo error over the s-draws
};

// Draws s_1..s_nmc from mu; per draw, |mean_j e^{i s X_j}(is + score(X_j))|^2.
// V-statistic flavour: both factors of the squared modulus share the samples.
SpectralEstimate spectral_ksd_mc(const std::vector<double>& samples,
                                 const ScalarModel& model, SpectralFamily mu,
                                 int n_mc, Rng& rng);

// Closed-form d = 1 Stein kernel
// h(x,y) = s(x)s(y)k + s(x) d2k + s(y) d1k + d1d2k.
double stein_kernel_1d(double x, double y, const ScalarModel& model,
                       KernelFamily family, double gamma);

struct TestFunctionRow {
  int curve{0};
  double s{0.0};
  double x{0.0};
  double real_part{0.0};
  double score{0.0};
};

std::vector<TestFunctionRow> emit_testfunction_data(const ScalarModel& model,
                                                    SpectralFamily mu, int n_curves,
                                                    double x_lo, double x_hi, int n_x,
                                                    Rng& rng);

}  // namespace fksd
