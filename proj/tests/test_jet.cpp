#include <cmath>

#include <gtest/gtest.h>

#include "dsoar/jet.hpp"

using dsoar::Jet;

namespace {

// x0 + eps_0
Jet seed(double x0) { return Jet::join(Jet(x0), Jet(1.0), 0); }

// x0 + eps_0 + eps_1: coefficient 3 of f(x) is f''(x0).
Jet seed2(double x0) {
  const Jet first = seed(x0);
  return Jet::join(first, Jet(1.0), 1);
}

}  // namespace

TEST(Jet, ConstantHasOrderZero) {
  const Jet c(3.5);
  EXPECT_EQ(c.order(), 0);
  EXPECT_DOUBLE_EQ(c.value(), 3.5);
  EXPECT_DOUBLE_EQ(c.coeff(1), 0.0);
}

TEST(Jet, ProductRule) {
  const Jet x = seed(2.0);
  const Jet y = x * x * x;
  EXPECT_DOUBLE_EQ(y.value(), 8.0);
  EXPECT_DOUBLE_EQ(y.coeff(1), 12.0);
}

TEST(Jet, QuotientMatchesAnalytic) {
  const Jet x = seed(0.7);
  const Jet y = (1.0 + x) / (2.0 - x * x);
  const double d = 2.0 - 0.49;
  EXPECT_NEAR(y.value(), 1.7 / d, 1e-15);
  EXPECT_NEAR(y.coeff(1), (d + 1.7 * 2 * 0.7) / (d * d), 1e-14);
}

TEST(Jet, ElementaryFunctionDerivatives) {
  const double x0 = 0.37;
  const Jet x = seed(x0);
  EXPECT_NEAR(sin(x).coeff(1), std::cos(x0), 1e-15);
  EXPECT_NEAR(cos(x).coeff(1), -std::sin(x0), 1e-15);
  EXPECT_NEAR(tan(x).coeff(1), 1.0 / (std::cos(x0) * std::cos(x0)), 1e-14);
  EXPECT_NEAR(exp(x).coeff(1), std::exp(x0), 1e-15);
  EXPECT_NEAR(log(x).coeff(1), 1.0 / x0, 1e-14);
  EXPECT_NEAR(sqrt(x).coeff(1), 0.5 / std::sqrt(x0), 1e-14);
  EXPECT_NEAR(abs(-x).coeff(1), 1.0, 0.0);
}

TEST(Jet, SecondDerivativeFromTwoInfinitesimals) {
  const double x0 = 0.9;
  const Jet x = seed2(x0);
  EXPECT_NEAR(sin(x).coeff(3), -std::sin(x0), 1e-14);
  EXPECT_NEAR(exp(x).coeff(3), std::exp(x0), 1e-14);
  EXPECT_NEAR(log(x).coeff(3), -1.0 / (x0 * x0), 1e-13);
  EXPECT_NEAR(sqrt(x).coeff(3), -0.25 * std::pow(x0, -1.5), 1e-13);
  const Jet q = 1.0 / x;
  EXPECT_NEAR(q.coeff(3), 2.0 / (x0 * x0 * x0), 1e-12);
}

TEST(Jet, SplitJoinRoundTrip) {
  const Jet x = seed2(1.3);
  const auto [low, high] = x.split(1);
  EXPECT_EQ(low.order(), 1);
  EXPECT_EQ(Jet::join(low, high, 1), x);
  const auto [same, zero] = low.split(3);
  EXPECT_EQ(same, low);
  EXPECT_DOUBLE_EQ(zero.value(), 0.0);
}

TEST(Jet, SplitBelowTopSlotThrows) {
  const Jet x = seed2(1.0);
  EXPECT_THROW((void)x.split(0), std::logic_error);
}

TEST(Jet, JoinBeyondCapThrows) {
  EXPECT_THROW((void)Jet::join(Jet(1.0), Jet(1.0), Jet::kMaxOrder), std::length_error);
}

TEST(Jet, ComparisonsUseRealPart) {
  EXPECT_TRUE(seed(1.0) < Jet(2.0));
  EXPECT_TRUE(seed(3.0) > 2.0);
}

TEST(Jet, EigenVectorArithmetic) {
  dsoar::JetVector v(2);
  v << seed(1.0), Jet(2.0);
  const dsoar::JetVector w = 2.0 * v + v;
  EXPECT_DOUBLE_EQ(w[0].coeff(1), 3.0);
  EXPECT_EQ(dsoar::jet_order(w), 1);
  EXPECT_DOUBLE_EQ(dsoar::values_of(w)[1], 6.0);
}
