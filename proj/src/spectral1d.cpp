#include "fksd/spectral1d.hpp"

#include <cmath>

namespace fksd {

double spectral_draw(SpectralFamily family, Rng& rng) {
  switch (family) {
    case SpectralFamily::Gaussian: return rng.normal();
    case SpectralFamily::StudentT2: return rng.student_t2();
    case SpectralFamily::Cauchy: return rng.cauchy();
  }
  throw std::invalid_argument("spectral_draw: unknown family");
}

std::complex<double> test_function(double s, double x, const ScalarModel& model) {
  double sc = model.score(x);
  double c = std::cos(s * x), sn = std::sin(s * x);
  return {-s * s * c - s * sn * sc, -s * s * sn + s * c * sc};
}

SpectralEstimate spectral_ksd_mc(const std::vector<double>& samples,
                                 const ScalarModel& model, SpectralFamily mu,
                                 int n_mc, Rng& rng) {
  if (samples.empty()) throw std::invalid_argument("spectral_ksd_mc: no samples");
  if (n_mc < 1) throw std::invalid_argument("spectral_ksd_mc: n_mc < 1");
  const double n = double(samples.size());
  std::vector<double> scores(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) scores[j] = model.score(samples[j]);

  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    double s = spectral_draw(mu, rng);
    // mean over samples of e^{isX}(is + score(X))
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
      double c = std::cos(s * samples[j]), sn = std::sin(s * samples[j]);
      re += c * scores[j] - sn * s;
      im += sn * scores[j] + c * s;
    }
    re /= n;
    im /= n;
    double v = re * re + im * im;
    sum += v;
    sum_sq += v * v;
  }
  SpectralEstimate est;
  est.value = sum / n_mc;
  double var = std::max(sum_sq / n_mc - est.value * est.value, 0.0);
  est.std_error = std::sqrt(var / n_mc);
  return est;
}

double stein_kernel_1d(double x, double y, const ScalarModel& model,
                       KernelFamily family, double gamma) {
  double sx = model.score(x), sy = model.score(y);
  double r = x - y;
  double g2 = gamma * gamma;
  double k, d1k, d2k, d12k;
  if (family == KernelFamily::SE) {
    k = std::exp(-0.5 * r * r / g2);
    d1k = -r / g2 * k;
    d2k = r / g2 * k;
    d12k = (1.0 / g2 - r * r / (g2 * g2)) * k;
  } else {
    double q = r * r / g2 + 1.0;
    k = 1.0 / std::sqrt(q);
    double q32 = k / q;       // q^{-3/2}
    double q52 = q32 / q;     // q^{-5/2}
    d1k = -r / g2 * q32;
    d2k = r / g2 * q32;
    d12k = q32 / g2 - 3.0 * r * r / (g2 * g2) * q52;
  }
  return sx * sy * k + sx * d2k + sy * d1k + d12k;
}

std::vector<TestFunctionRow> emit_testfunction_data(const ScalarModel& model,
                                                    SpectralFamily mu, int n_curves,
                                                    double x_lo, double x_hi, int n_x,
                                                    Rng& rng) {
  if (n_x < 2) throw std::invalid_argument("emit_testfunction_data: n_x < 2");
  std::vector<double> s_vals(n_curves);
  for (int c = 0; c < n_curves; ++c) s_vals[c] = spectral_draw(mu, rng);
  std::vector<TestFunctionRow> rows;
  rows.reserve(std::size_t(std::max(n_curves, 1)) * n_x);
  double dx = (x_hi - x_lo) / double(n_x - 1);
  for (int ix = 0; ix < n_x; ++ix) {
    double x = x_lo + ix * dx;
    double sc = model.score(x);
    if (n_curves == 0) {
      rows.push_back({-1, 0.0, x, 0.0, sc});
      continue;
    }
    for (int c = 0; c < n_curves; ++c)
      rows.push_back({c, s_vals[c], x, test_function(s_vals[c], x, model).real(), sc});
  }
  return rows;
}

}  // namespace fksd
