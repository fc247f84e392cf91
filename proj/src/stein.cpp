#include "fksd/stein.hpp"

#include <cmath>

namespace fksd {

namespace {

// Weighted dot <u, v> under the grid quadrature.
double wdot(const Vector& u, const Vector& w, const Vector& v) {
  return u.cwiseProduct(w).dot(v);
}

}  // namespace

SteinContext make_stein_context(Target target, KernelConfig kernel) {
  if (kernel.gamma <= 0.0) throw std::invalid_argument("make_stein_context: gamma <= 0");
  SteinContext ctx;
  const Eigen::Index m = target.grid.m;
  double inv_g2 = 1.0 / (kernel.gamma * kernel.gamma);
  if (kernel.T) {
    require_same_grid(kernel.T->grid, target.grid, "make_stein_context");
    // T self-adjoint under the quadrature inner product by construction
    ctx.S = inv_g2 * (kernel.T->matrix * kernel.T->matrix);
  } else {
    ctx.S = inv_g2 * Matrix::Identity(m, m);
  }
  const Matrix& c = target.C.matrix;
  ctx.SC = ctx.S * c;
  ctx.CS = c * ctx.S;
  ctx.trace_SC2 = (ctx.SC * c).trace();
  ctx.target = std::move(target);
  ctx.kernel = std::move(kernel);
  return ctx;
}

double stein_kernel(const SteinContext& ctx, const FunctionSample& x,
                    const FunctionSample& y) {
  require_same_grid(ctx.target.grid, x.grid, "stein_kernel");
  require_same_grid(ctx.target.grid, y.grid, "stein_kernel");
  const Vector& w = ctx.target.grid.weights;

  Vector cx = cdu(ctx.target, x).values;
  Vector cy = cdu(ctx.target, y).values;
  Vector bx = x.values + cx;
  Vector by = y.values + cy;
  Vector d = x.values - y.values;

  double gbb = wdot(bx, w, by);
  Vector scd = ctx.SC * d;
  double sc_dd = wdot(scd, w, d);
  Vector scdc = ctx.SC * (cx - cy);
  double sc_cd = wdot(scdc, w, d);
  Vector csd = ctx.CS * d;
  double cs_sq = wdot(csd, w, csd);
  double k = kernel_eval(ctx.kernel, x, y);

  if (ctx.kernel.family == KernelFamily::SE)
    return k * (gbb - sc_dd - sc_cd + ctx.trace_SC2 - cs_sq);
  double k3 = k * k * k;
  return k * gbb + k3 * (ctx.trace_SC2 - sc_dd - sc_cd) - 3.0 * k3 * k * k * cs_sq;
}

SteinGram build_gram(const SteinContext& ctx, const std::vector<FunctionSample>& samples) {
  const Eigen::Index n = Eigen::Index(samples.size());
  if (n < 1) throw std::invalid_argument("build_gram: empty sample list");
  const Grid& g = ctx.target.grid;
  const Eigen::Index m = g.m;

  Matrix x(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require_same_grid(samples[i].grid, g, "build_gram");
    x.col(i) = samples[i].values;
  }
  Matrix cdu_mat = Matrix::Zero(m, n);
  if (ctx.target.is_gibbs())
    cdu_mat = ctx.target.C.matrix * x.unaryExpr(ctx.target.du_pointwise);
  Matrix b = x + cdu_mat;

  auto weigh = [&](const Matrix& a) { return (a.array().colwise() * g.weights.array()).matrix(); };
  auto sym_combo = [n](const Matrix& a) {
    // entry (i,j) = a_ii - a_ij - a_ji + a_jj
    Vector da = a.diagonal();
    Vector ones = Vector::Ones(n);
    return Matrix(da * ones.transpose() + ones * da.transpose() - a - a.transpose());
  };

  Matrix gbb = b.transpose() * weigh(b);
  Matrix sc_dd = sym_combo(x.transpose() * weigh(ctx.SC * x));
  Matrix sc_cd = sym_combo(x.transpose() * weigh(ctx.SC * cdu_mat));
  Matrix csx = ctx.CS * x;
  Matrix cs_sq = sym_combo(csx.transpose() * weigh(csx));
  Matrix tx = ctx.kernel.T ? Matrix(ctx.kernel.T->matrix * x) : x;
  Matrix dist2 = sym_combo(tx.transpose() * weigh(tx)).cwiseMax(0.0) /
                 (ctx.kernel.gamma * ctx.kernel.gamma);

  Matrix k, h;
  if (ctx.kernel.family == KernelFamily::SE) {
    k = (-0.5 * dist2.array()).exp().matrix();
    h = k.cwiseProduct(gbb - sc_dd - sc_cd - cs_sq +
                       Matrix::Constant(n, n, ctx.trace_SC2));
  } else {
    k = (dist2.array() + 1.0).rsqrt().matrix();
    Matrix k3 = k.array().cube().matrix();
    Matrix k5 = k3.cwiseProduct(k).cwiseProduct(k);
    h = k.cwiseProduct(gbb) +
        k3.cwiseProduct(Matrix::Constant(n, n, ctx.trace_SC2) - sc_dd - sc_cd) -
        3.0 * k5.cwiseProduct(cs_sq);
  }
  // mirror the upper triangle so symmetry is exact
  for (Eigen::Index i = 1; i < n; ++i)
    for (Eigen::Index j = 0; j < i; ++j) h(i, j) = h(j, i);
  return SteinGram{std::move(h)};
}

double u_statistic(const SteinGram& gram) {
  const Eigen::Index n = gram.n();
  if (n < 2) throw std::invalid_argument("u_statistic: need n >= 2");
  return (gram.entries.sum() - gram.entries.trace()) / (double(n) * double(n - 1));
}

double v_statistic(const SteinGram& gram) {
  const Eigen::Index n = gram.n();
  return gram.entries.sum() / (double(n) * double(n));
}

}  // namespace fksd
