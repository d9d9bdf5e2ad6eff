#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "dsoar/wind.hpp"

using dsoar::WindParams;

TEST(Wind, SpeedExamples) {
  const WindParams p;
  EXPECT_DOUBLE_EQ(dsoar::wind_speed(0.0, p), 3.9);
  EXPECT_NEAR(dsoar::wind_speed(7.0, p), 7.8 / (1.0 + std::exp(-1.0)), 1e-12);
  EXPECT_NEAR(dsoar::wind_speed(7.0, p), 5.7023, 5e-5);
  EXPECT_NEAR(dsoar::wind_speed(1e4, p), 7.8, 1e-12);
}

TEST(Wind, GradientExamples) {
  const WindParams p;
  EXPECT_NEAR(dsoar::wind_gradient(0.0, p), 7.8 / 28.0, 1e-15);
  EXPECT_NEAR(dsoar::wind_gradient(10.0, p), 0.173771, 5e-7);
  EXPECT_NEAR(dsoar::wind_gradient(1e4, p), 0.0, 1e-12);
  EXPECT_EQ(dsoar::wind_gradient(-1e5, p), 0.0);
}

TEST(Wind, RateExamples) {
  const WindParams p;
  EXPECT_NEAR(dsoar::wind_rate(10.0, 14.0, 0.6, p), dsoar::wind_gradient(10.0, p) * 14.0 * std::sin(0.6), 1e-14);
  EXPECT_NEAR(dsoar::wind_rate(10.0, 14.0, 0.6, p), 1.3736578, 5e-7);
  EXPECT_EQ(dsoar::wind_rate(10.0, 14.0, 0.0, p), 0.0);
  EXPECT_EQ(dsoar::wind_rate(10.0, 0.0, 0.6, p), 0.0);
}

TEST(Wind, FarBelowLayerIsClampedNotOverflowing) {
  const WindParams p;
  const double z = -800.0 * p.delta;
  EXPECT_EQ(dsoar::wind_speed(z, p), 0.0);
  EXPECT_TRUE(std::isfinite(dsoar::wind_rate(z, 14.0, 0.3, p)));
}

TEST(Wind, NonFiniteInputsThrow) {
  const WindParams p;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW((void)dsoar::wind_speed(nan, p), std::domain_error);
  EXPECT_THROW((void)dsoar::wind_gradient(INFINITY, p), std::domain_error);
  EXPECT_THROW((void)dsoar::wind_rate(1.0, nan, 0.1, p), std::domain_error);
}

TEST(Wind, ParamValidationNamesField) {
  WindParams p;
  p.delta = 0.0;
  try {
    p.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("delta"), std::string::npos);
  }
  p = WindParams{};
  p.w0 = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(WindProperty, GradientMatchesCentralDifference) {
  const WindParams p;
  const double h = 1e-4 * p.delta;
  for (double z = -5 * p.delta; z <= 5 * p.delta; z += 0.37) {
    const double fd = (dsoar::wind_speed(z + h, p) - dsoar::wind_speed(z - h, p)) / (2 * h);
    const double g = dsoar::wind_gradient(z, p);
    EXPECT_NEAR(fd, g, 1e-6 * g) << "z=" << z;
  }
}

TEST(WindProperty, MonotoneBoundedAndPeakedAtZero) {
  const WindParams p;
  double prev = -1.0;
  for (double z = -60.0; z <= 60.0; z += 0.5) {
    const double w = dsoar::wind_speed(z, p);
    EXPECT_GE(w, prev);
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, p.w0);
    EXPECT_GT(dsoar::wind_gradient(z, p), 0.0);
    EXPECT_LE(dsoar::wind_gradient(z, p), dsoar::wind_gradient(0.0, p));
    prev = w;
  }
}

TEST(WindProperty, RayleighStepLimit) {
  for (double z : {-3.0, -0.5, 0.5, 2.0, 10.0}) {
    WindParams p;
    p.delta = std::abs(z) / 50.0;
    const double step = z > 0 ? p.w0 : 0.0;
    EXPECT_NEAR(dsoar::wind_speed(z, p), step, 1e-9) << "z=" << z;
  }
}

TEST(WindProperty, RateIsOddInGamma) {
  const WindParams p;
  for (double g : {0.05, 0.3, 1.1}) {
    EXPECT_DOUBLE_EQ(dsoar::wind_rate(3.0, 12.0, -g, p), -dsoar::wind_rate(3.0, 12.0, g, p));
  }
}
