#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dsoar/lie.hpp"

namespace dsoar {

/// A scalar input u(t) with the times where it may jump, so quadrature
/// grids can place nodes there.
struct InputSignal {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;

  double operator()(double t) const { return eval(t); }

  static InputSignal constant(double c);
  /// values[j] holds on [j*T/n, (j+1)*T/n); the last value continues past T.
  static InputSignal piecewise_constant(std::vector<double> values, double t_end);
};

/// n pieces with values uniform in [-bound, bound].
InputSignal random_piecewise_constant(std::mt19937_64& rng, double t_end, int pieces,
                                      double bound);

/// (i_k, ..., i_0), outermost integral first; 0 is the drift (dxi_0 = dt),
/// a >= 1 the a-th input.
struct MultiIndex {
  std::vector<int> entries;

  int length() const { return static_cast<int>(entries.size()); }
  /// Throws std::invalid_argument if empty or out of {0..num_inputs}.
  void validate(int num_inputs) const;
  std::string to_string() const;
};

struct QuadratureOptions {
  double relative_step = 1e-3;  ///< node spacing as a fraction of t
};

/// int_0^t dxi_{i_k} ... int_0^{tau_1} dxi_{i_0}, cumulative trapezoid per
/// level on a grid refined at input breakpoints. Inputs are sampled at cell
/// midpoints.
double iterated_integral(const MultiIndex& idx, const std::vector<InputSignal>& inputs, double t,
                         const QuadratureOptions& q = {});

/// L_{b_{i_0}} ... L_{b_{i_k}} h at x0 (L_{b_{i_k}} acts on h first), exact
/// via Taylor arithmetic.
double lie_derivative_coefficient(const MultiIndex& idx, const ScalarField& h,
                                  const ControlAffineSystem& sys, const Eigen::VectorXd& x0);

inline constexpr int kMaxFliessOrder = 3;

struct FliessTerm {
  MultiIndex index;
  double coefficient = 0.0;
  double integral = 0.0;
};

struct FliessExpansion {
  double h0 = 0.0;
  std::vector<FliessTerm> terms;
  double value() const;
};

/// Every term with multi-index length <= order + 1. Throws for order outside
/// [0, kMaxFliessOrder] or t < 0.
FliessExpansion fliess_expansion(const ScalarField& h, const ControlAffineSystem& sys,
                                 const Eigen::VectorXd& x0, const std::vector<InputSignal>& inputs,
                                 double t, int order, const QuadratureOptions& q = {});

double fliess_output(const ScalarField& h, const ControlAffineSystem& sys,
                     const Eigen::VectorXd& x0, const std::vector<InputSignal>& inputs, double t,
                     int order, const QuadratureOptions& q = {});

/// y(t) = y0 + x0^2 t + 2 x0 int int u + 2 int int int u * int u for
/// xdot = u, ydot = x^2.
double example2_exact_output(double x0, double y0, const InputSignal& u, double t,
                             const QuadratureOptions& q = {});

/// RK4 integration of xdot = u, ydot = x^2 with steps aligned to the
/// breakpoints of u, which must be constant between them. Returns (x(t), y(t)).
Eigen::Vector2d example2_ode(double x0, double y0, const InputSignal& u, double t,
                             double h = 1e-3);

}  // namespace dsoar
