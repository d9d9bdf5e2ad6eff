#include "dsoar/chen_fliess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dsoar/integrator.hpp"

namespace dsoar {

InputSignal InputSignal::constant(double c) {
  return {[c](double) { return c; }, {}};
}

InputSignal InputSignal::piecewise_constant(std::vector<double> values, double t_end) {
  if (values.empty()) throw std::invalid_argument("piecewise_constant: no values");
  if (!(t_end > 0.0)) throw std::invalid_argument("piecewise_constant: t_end must be > 0");
  const auto n = values.size();
  const double width = t_end / static_cast<double>(n);
  InputSignal s;
  for (std::size_t j = 1; j < n; ++j) s.breakpoints.push_back(static_cast<double>(j) * width);
  s.eval = [values = std::move(values), width](double t) {
    if (t <= 0.0) return values.front();
    const auto j = static_cast<std::size_t>(t / width);
    return values[std::min(j, values.size() - 1)];
  };
  return s;
}

InputSignal random_piecewise_constant(std::mt19937_64& rng, double t_end, int pieces,
                                      double bound) {
  if (pieces < 1) throw std::invalid_argument("pieces must be >= 1");
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> values(static_cast<std::size_t>(pieces));
  for (double& v : values) v = dist(rng);
  return InputSignal::piecewise_constant(std::move(values), t_end);
}

void MultiIndex::validate(int num_inputs) const {
  if (entries.empty()) throw std::invalid_argument("multi-index must be nonempty");
  for (int i : entries) {
    if (i < 0 || i > num_inputs) {
      throw std::invalid_argument("multi-index entry " + std::to_string(i) + " outside {0.." +
                                  std::to_string(num_inputs) + "}");
    }
  }
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(entries[j]);
  }
  return out + ")";
}

namespace {

std::vector<double> quadrature_grid(const std::vector<InputSignal>& inputs, double t,
                                    const QuadratureOptions& q) {
  if (!(q.relative_step > 0.0 && q.relative_step <= 1.0)) {
    throw std::invalid_argument("relative_step must be in (0, 1]");
  }
  const auto cells = static_cast<std::size_t>(std::ceil(1.0 / q.relative_step - 1e-9));
  std::vector<double> grid;
  grid.reserve(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    grid.push_back(t * static_cast<double>(j) / static_cast<double>(cells));
  }
  for (const auto& u : inputs) {
    for (double b : u.breakpoints) {
      if (b > 0.0 && b < t) grid.push_back(b);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [t](double a, double b) { return std::abs(a - b) <= 1e-12 * t; }),
             grid.end());
  return grid;
}

}  // namespace

double iterated_integral(const MultiIndex& idx, const std::vector<InputSignal>& inputs, double t,
                         const QuadratureOptions& q) {
  idx.validate(static_cast<int>(inputs.size()));
  if (t < 0.0) throw std::invalid_argument("iterated_integral: t must be >= 0");
  if (t == 0.0) return 0.0;
  const std::vector<double> grid = quadrature_grid(inputs, t, q);
  const std::size_t n = grid.size();

  std::vector<double> inner(n, 1.0);
  std::vector<double> outer(n, 0.0);
  // Innermost integral is i_0, the last entry.
  for (auto it = idx.entries.rbegin(); it != idx.entries.rend(); ++it) {
    const int input = *it;
    outer[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
      const double dt = grid[j] - grid[j - 1];
      const double rate =
          input == 0 ? 1.0 : inputs[static_cast<std::size_t>(input - 1)](0.5 * (grid[j] + grid[j - 1]));
      outer[j] = outer[j - 1] + dt * rate * 0.5 * (inner[j - 1] + inner[j]);
    }
    std::swap(inner, outer);
  }
  return inner.back();
}

namespace {

using JetScalarMap = std::function<Jet(const JetVector&)>;

// L_F phi = D phi . F, one fresh infinitesimal per derivative.
JetScalarMap lie_derivative(JetScalarMap phi, const VectorField& F) {
  return [phi = std::move(phi), F](const JetVector& x) {
    const int slot = jet_order(x);
    const JetVector fx = F.eval_jet(x);
    JetVector y(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = Jet::join(x[i], fx[i], slot);
    return phi(y).split(slot).second;
  };
}

}  // namespace

double lie_derivative_coefficient(const MultiIndex& idx, const ScalarField& h,
                                  const ControlAffineSystem& sys, const Eigen::VectorXd& x0) {
  idx.validate(sys.num_controls());
  JetScalarMap phi = h.eval_jet;
  for (int symbol : idx.entries) phi = lie_derivative(std::move(phi), sys.field(symbol));
  return phi(to_jets(x0)).value();
}

double FliessExpansion::value() const {
  double y = h0;
  for (const auto& term : terms) y += term.coefficient * term.integral;
  return y;
}

FliessExpansion fliess_expansion(const ScalarField& h, const ControlAffineSystem& sys,
                                 const Eigen::VectorXd& x0, const std::vector<InputSignal>& inputs,
                                 double t, int order, const QuadratureOptions& q) {
  if (order < 0 || order > kMaxFliessOrder) {
    throw std::invalid_argument("fliess order " + std::to_string(order) +
                                " outside supported range [0, " +
                                std::to_string(kMaxFliessOrder) + "]");
  }
  if (static_cast<int>(inputs.size()) != sys.num_controls()) {
    throw std::invalid_argument("fliess_expansion: expected " +
                                std::to_string(sys.num_controls()) + " input signal(s)");
  }
  if (t < 0.0) throw std::invalid_argument("fliess_expansion: t must be >= 0");

  FliessExpansion out;
  out.h0 = h.eval(x0);
  const int base = sys.num_controls() + 1;
  for (int len = 1; len <= order + 1; ++len) {
    int count = 1;
    for (int j = 0; j < len; ++j) count *= base;
    for (int code = 0; code < count; ++code) {
      MultiIndex idx;
      int c = code;
      for (int j = 0; j < len; ++j) {
        idx.entries.push_back(c % base);
        c /= base;
      }
      std::reverse(idx.entries.begin(), idx.entries.end());
      FliessTerm term{idx, lie_derivative_coefficient(idx, h, sys, x0), 0.0};
      if (term.coefficient != 0.0) term.integral = iterated_integral(idx, inputs, t, q);
      out.terms.push_back(std::move(term));
    }
  }
  return out;
}

double fliess_output(const ScalarField& h, const ControlAffineSystem& sys,
                     const Eigen::VectorXd& x0, const std::vector<InputSignal>& inputs, double t,
                     int order, const QuadratureOptions& q) {
  return fliess_expansion(h, sys, x0, inputs, t, order, q).value();
}

double example2_exact_output(double x0, double y0, const InputSignal& u, double t,
                             const QuadratureOptions& q) {
  const std::vector<InputSignal> inputs{u};
  double y = y0 + x0 * x0 * t;
  if (x0 != 0.0) y += 2.0 * x0 * iterated_integral(MultiIndex{{0, 1}}, inputs, t, q);
  y += 2.0 * iterated_integral(MultiIndex{{0, 1, 1}}, inputs, t, q);
  return y;
}

Eigen::Vector2d example2_ode(double x0, double y0, const InputSignal& u, double t, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("example2_ode: h must be > 0");
  std::vector<double> knots{0.0};
  for (double b : u.breakpoints) {
    if (b > 0.0 && b < t) knots.push_back(b);
  }
  knots.push_back(t);
  std::sort(knots.begin(), knots.end());

  Eigen::Vector2d s(x0, y0);
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double a = knots[k - 1];
    const double span = knots[k] - a;
    if (span <= 0.0) continue;
    const auto steps = static_cast<int>(std::ceil(span / h - 1e-9));
    const double step = span / steps;
    // The input is constant on the open piece; sample it at the midpoint.
    const double uk = u(a + 0.5 * span);
    auto deriv = [uk](double, const Eigen::Vector2d& z) {
      return Eigen::Vector2d(uk, z[0] * z[0]);
    };
    for (int i = 0; i < steps; ++i) s = rk4_step(deriv, s, a + i * step, step);
  }
  return s;
}

}  // namespace dsoar
