#include "fksd/fn_space.hpp"

#include <cmath>

namespace fksd {

Grid make_uniform_grid(double a, double b, Eigen::Index m) {
  if (m < 2) throw std::invalid_argument("make_uniform_grid: need m >= 2");
  if (!(a < b)) throw std::invalid_argument("make_uniform_grid: need a < b");
  Grid g;
  g.a = a;
  g.b = b;
  g.m = m;
  g.points = Vector::LinSpaced(m, a, b);
  double h = (b - a) / double(m - 1);
  g.weights = Vector::Constant(m, h);
  g.weights(0) = 0.5 * h;
  g.weights(m - 1) = 0.5 * h;
  return g;
}

void require_same_grid(const Grid& g, const Grid& h, const char* where) {
  if (!same_grid(g, h))
    throw IncompatibleGridError(std::string(where) + ": grids do not match");
}

FunctionSample make_sample(const Grid& grid, Vector values) {
  if (values.size() != grid.m)
    throw std::invalid_argument("make_sample: value count does not match grid");
  if (!values.allFinite())
    throw std::invalid_argument("make_sample: non-finite values");
  return FunctionSample{grid, std::move(values)};
}

FunctionSample sample_from_fn(const Grid& grid, const std::function<double(double)>& f) {
  Vector v(grid.m);
  for (Eigen::Index i = 0; i < grid.m; ++i) v(i) = f(grid.points(i));
  return make_sample(grid, std::move(v));
}

double inner(const FunctionSample& f, const FunctionSample& g) {
  require_same_grid(f.grid, g.grid, "inner");
  return f.values.cwiseProduct(f.grid.weights).dot(g.values);
}

double sq_norm(const FunctionSample& f) { return inner(f, f); }

GridOperator identity_operator(const Grid& grid) {
  return GridOperator{grid, Matrix::Identity(grid.m, grid.m)};
}

GridOperator integral_operator(const std::function<double(double, double)>& kfn,
                               const Grid& grid) {
  Matrix m(grid.m, grid.m);
  for (Eigen::Index i = 0; i < grid.m; ++i)
    for (Eigen::Index j = 0; j < grid.m; ++j) {
      double v = kfn(grid.points(i), grid.points(j));
      if (!std::isfinite(v))
        throw std::invalid_argument("integral_operator: non-finite kernel value");
      m(i, j) = v * grid.weights(j);
    }
  return GridOperator{grid, std::move(m)};
}

FunctionSample apply(const GridOperator& op, const FunctionSample& f) {
  require_same_grid(op.grid, f.grid, "apply");
  return FunctionSample{f.grid, op.matrix * f.values};
}

EigenSystem make_eigensystem(const Grid& grid, const std::function<double(int)>& lambda,
                             const std::function<double(int, double)>& efn, int count) {
  if (count < 1) throw std::invalid_argument("make_eigensystem: need count >= 1");
  EigenSystem es;
  es.grid = grid;
  es.eigenvalues.resize(count);
  es.basis.resize(grid.m, count);
  for (int i = 0; i < count; ++i) {
    es.eigenvalues(i) = lambda(i + 1);
    for (Eigen::Index j = 0; j < grid.m; ++j) es.basis(j, i) = efn(i + 1, grid.points(j));
  }
  return es;
}

GridOperator rank_update_operator(const EigenSystem& eigsys, const Vector& multipliers) {
  if (multipliers.size() > eigsys.count())
    throw std::invalid_argument("rank_update_operator: more multipliers than eigenpairs");
  const Grid& g = eigsys.grid;
  Matrix m = Matrix::Identity(g.m, g.m);
  for (Eigen::Index i = 0; i < multipliers.size(); ++i) {
    Vector e = eigsys.basis.col(i);
    // rank-one term e <e, .> under the quadrature inner product
    m.noalias() += (multipliers(i) - 1.0) * e * e.cwiseProduct(g.weights).transpose();
  }
  return GridOperator{g, std::move(m)};
}

GridOperator compose(const GridOperator& a, const GridOperator& b) {
  require_same_grid(a.grid, b.grid, "compose");
  return GridOperator{a.grid, a.matrix * b.matrix};
}

double op_trace(const GridOperator& a) { return a.matrix.trace(); }

}  // namespace fksd
