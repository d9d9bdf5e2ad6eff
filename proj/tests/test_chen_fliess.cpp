#include <chrono>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dsoar/chen_fliess.hpp"
#include "dsoar/systems.hpp"

using namespace dsoar;

namespace {

// xdot = -x + u, y = x.
ControlAffineSystem decay_system() {
  ControlAffineSystem sys;
  sys.name = "decay";
  sys.drift = make_vector_field("f", 1, [](const auto& x) { return (-x).eval(); });
  sys.controls.push_back(make_vector_field("b", 1, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    Eigen::Matrix<S, Eigen::Dynamic, 1> out(1);
    out[0] = S(1.0);
    return out;
  }));
  return sys;
}

const ScalarField kFirst = make_scalar_field("x", [](const auto& x) { return x[0]; });
const ScalarField kSecond = make_scalar_field("y", [](const auto& x) { return x[1]; });

}  // namespace

TEST(MultiIndex, ValidationAndPrinting) {
  EXPECT_EQ((MultiIndex{{0, 1, 1}}).to_string(), "(0,1,1)");
  EXPECT_THROW((MultiIndex{{}}).validate(1), std::invalid_argument);
  EXPECT_THROW((MultiIndex{{0, 2}}).validate(1), std::invalid_argument);
  EXPECT_NO_THROW((MultiIndex{{0, 2}}).validate(2));
}

TEST(IteratedIntegral, DriftOnlyIndices) {
  const std::vector<InputSignal> u{InputSignal::constant(0.3)};
  for (double t : {0.5, 2.0}) {
    EXPECT_NEAR(iterated_integral({{0}}, u, t), t, 1e-12);
    EXPECT_NEAR(iterated_integral({{0, 0}}, u, t), t * t / 2, 1e-12);
    EXPECT_NEAR(iterated_integral({{0, 0, 0}}, u, t), t * t * t / 6, 1e-6 * t * t * t);
  }
  EXPECT_EQ(iterated_integral({{0, 1}}, u, 0.0), 0.0);
}

TEST(IteratedIntegral, ConstantInput) {
  const double c = 0.7;
  const std::vector<InputSignal> u{InputSignal::constant(c)};
  EXPECT_NEAR(iterated_integral({{1}}, u, 1.5), c * 1.5, 1e-12);
  EXPECT_NEAR(iterated_integral({{1, 1}}, u, 1.5), c * c * 1.5 * 1.5 / 2, 1e-12);
}

TEST(IteratedIntegral, OuterEntryIsTheLastIntegration) {
  // u = 1 on [0, 1), 0 afterwards.
  const std::vector<InputSignal> u{InputSignal::piecewise_constant({1.0, 0.0}, 2.0)};
  // int_0^2 xi_1(tau) dtau = 1/2 + 1
  EXPECT_NEAR(iterated_integral({{0, 1}}, u, 2.0), 1.5, 1e-9);
  // int_0^2 u(tau) tau dtau = 1/2
  EXPECT_NEAR(iterated_integral({{1, 0}}, u, 2.0), 0.5, 1e-9);
}

TEST(LieDerivative, Example2Coefficients) {
  const ControlAffineSystem sys = example2_system();
  Eigen::VectorXd x0(2);
  x0 << 0.4, -1.0;
  EXPECT_NEAR(lie_derivative_coefficient({{0}}, kSecond, sys, x0), 0.16, 1e-15);
  EXPECT_NEAR(lie_derivative_coefficient({{0, 1}}, kSecond, sys, x0), 0.8, 1e-15);
  EXPECT_NEAR(lie_derivative_coefficient({{0, 1, 1}}, kSecond, sys, x0), 2.0, 1e-14);
  EXPECT_EQ(lie_derivative_coefficient({{1, 0}}, kSecond, sys, x0), 0.0);
  EXPECT_EQ(lie_derivative_coefficient({{1}}, kSecond, sys, x0), 0.0);
  EXPECT_EQ(lie_derivative_coefficient({{1}}, kFirst, sys, x0), 1.0);
}

TEST(Fliess, ZeroTimeGivesOutputAtInitialState) {
  const ControlAffineSystem sys = example2_system();
  Eigen::VectorXd x0(2);
  x0 << 0.4, -1.0;
  const std::vector<InputSignal> u{InputSignal::constant(0.2)};
  EXPECT_EQ(fliess_output(kSecond, sys, x0, u, 0.0, 3), -1.0);
}

TEST(Fliess, Example2SecondOrderIsExact) {
  const ControlAffineSystem sys = example2_system();
  std::mt19937_64 rng(4);
  for (double x0v : {0.0, 0.3, -1.2}) {
    Eigen::VectorXd x0(2);
    x0 << x0v, 0.5;
    const std::vector<InputSignal> u{random_piecewise_constant(rng, 2.0, 6, 1.0)};
    for (double t : {0.5, 2.0}) {
      const double series = fliess_output(kSecond, sys, x0, u, t, 2);
      EXPECT_NEAR(series, example2_exact_output(x0v, 0.5, u[0], t), 1e-12);
      EXPECT_NEAR(series, example2_ode(x0v, 0.5, u[0], t)[1], 1e-6);
      EXPECT_NEAR(fliess_output(kSecond, sys, x0, u, t, 3), series, 1e-12);
    }
  }
}

TEST(Fliess, UnitInputFromOrigin) {
  const InputSignal one = InputSignal::constant(1.0);
  for (double t : {0.5, 1.0, 3.0}) {
    EXPECT_NEAR(example2_exact_output(0.0, 0.0, one, t), t * t * t / 3, 1e-6 * t * t * t);
    EXPECT_NEAR(example2_ode(0.0, 0.0, one, t)[1], t * t * t / 3, 1e-9);
  }
}

TEST(Fliess, DriftOnlySystemIsExact) {
  const ControlAffineSystem sys = example2_system();
  Eigen::VectorXd x0(2);
  x0 << 1.5, 2.0;
  const std::vector<InputSignal> u{InputSignal::constant(0.0)};
  EXPECT_NEAR(fliess_output(kSecond, sys, x0, u, 2.0, 1), 2.0 + 1.5 * 1.5 * 2.0, 1e-12);
}

TEST(Fliess, RejectsBadArguments) {
  const ControlAffineSystem sys = example2_system();
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
  const std::vector<InputSignal> u{InputSignal::constant(0.0)};
  EXPECT_THROW((void)fliess_output(kSecond, sys, x0, u, 1.0, kMaxFliessOrder + 1),
               std::invalid_argument);
  EXPECT_THROW((void)fliess_output(kSecond, sys, x0, u, -1.0, 1), std::invalid_argument);
  EXPECT_THROW((void)fliess_output(kSecond, sys, x0, {}, 1.0, 1), std::invalid_argument);
}

TEST(FliessProperty, TruncationErrorShrinksWithTime) {
  const ControlAffineSystem sys = decay_system();
  Eigen::VectorXd x0(1);
  x0 << 1.0;
  const double c = 0.5;
  const std::vector<InputSignal> u{InputSignal::constant(c)};
  const auto exact = [c](double t) { return c + (1.0 - c) * std::exp(-t); };
  for (int order = 0; order <= kMaxFliessOrder; ++order) {
    const double e1 = std::abs(fliess_output(kFirst, sys, x0, u, 0.4, order) - exact(0.4));
    const double e2 = std::abs(fliess_output(kFirst, sys, x0, u, 0.2, order) - exact(0.2));
    EXPECT_GE(std::log2(e1 / e2), order + 1 - 0.1) << "order " << order;
  }
}

TEST(FliessProperty, Example2OutputIsNonnegativeFromOrigin) {
  std::mt19937_64 rng(1);
  double min_y = INFINITY;
  double max_gap = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 1000; ++trial) {
    const InputSignal u = random_piecewise_constant(rng, 5.0, 10, 0.1);
    for (double t : {1.0, 2.5, 5.0}) {
      const double y = example2_exact_output(0.0, 0.0, u, t);
      min_y = std::min(min_y, y);
      max_gap = std::max(max_gap, std::abs(y - example2_ode(0.0, 0.0, u, t)[1]));
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_GE(min_y, 0.0);
  EXPECT_LE(max_gap, 1e-6);
  EXPECT_LT(seconds, 5.0);
}
