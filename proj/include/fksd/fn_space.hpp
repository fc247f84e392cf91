#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>

namespace fksd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct IncompatibleGridError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Uniform observation grid over [a, b] with trapezoid quadrature weights.
struct Grid {
  double a{0.0};
  double b{1.0};
  Eigen::Index m{0};
  Vector points;
  Vector weights;
};

Grid make_uniform_grid(double a, double b, Eigen::Index m);

inline bool same_grid(const Grid& g, const Grid& h) {
  return g.m == h.m && g.a == h.a && g.b == h.b;
}

void require_same_grid(const Grid& g, const Grid& h, const char* where);

// A function in L^2([a,b]) observed at the grid points.
struct FunctionSample {
  Grid grid;
  Vector values;
};

FunctionSample make_sample(const Grid& grid, Vector values);
FunctionSample sample_from_fn(const Grid& grid, const std::function<double(double)>& f);

// Quadrature inner product <f, g> = sum_i f_i g_i w_i.
double inner(const FunctionSample& f, const FunctionSample& g);
double sq_norm(const FunctionSample& f);

// Bounded linear operator discretised as a matrix acting on grid values.
struct GridOperator {
  Grid grid;
  Matrix matrix;
};

GridOperator identity_operator(const Grid& grid);
GridOperator integral_operator(const std::function<double(double, double)>& kfn,
                               const Grid& grid);
FunctionSample apply(const GridOperator& op, const FunctionSample& f);

// Truncated eigensystem {lambda_i, e_i}; basis columns hold e_i on the grid.
struct EigenSystem {
  Grid grid;
  Vector eigenvalues;  // positive, non-increasing
  Matrix basis;        // m x count
  Eigen::Index count() const { return eigenvalues.size(); }
};

EigenSystem make_eigensystem(const Grid& grid, const std::function<double(int)>& lambda,
                             const std::function<double(int, double)>& efn, int count);

// I + sum_i (eta_i - 1) e_i <e_i, .>, identity on the unspanned complement.
GridOperator rank_update_operator(const EigenSystem& eigsys, const Vector& multipliers);

GridOperator compose(const GridOperator& a, const GridOperator& b);

// Discretised operator trace; for integral operators this is the trapezoid
// approximation of the integral of the kernel diagonal.
double op_trace(const GridOperator& a);

}  // namespace fksd
