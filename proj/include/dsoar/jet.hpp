#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dsoar {

/// Truncated multivariate Taylor number over nilpotent infinitesimals
/// eps_0, eps_1, ... with eps_i^2 = 0.
///
/// A Jet of order k stores 2^k coefficients; coefficient `mask` multiplies
/// the product of the infinitesimals whose bits are set in `mask`. Nesting
/// one fresh infinitesimal per directional derivative gives exact iterated
/// directional derivatives, which is what iterated Lie brackets and
/// iterated Lie derivatives need.
class Jet {
 public:
  /// Hard cap on the number of infinitesimals in one expression.
  static constexpr int kMaxOrder = 12;

  Jet() = default;
  Jet(double value) : coeffs_{value} {}  // NOLINT(google-explicit-constructor)

  double value() const { return coeffs_[0]; }
  int order() const;
  std::size_t size() const { return coeffs_.size(); }

  /// Coefficient of the monomial `mask`; zero beyond the stored order.
  double coeff(std::size_t mask) const {
    return mask < coeffs_.size() ? coeffs_[mask] : 0.0;
  }

  /// Splits x = low + eps_slot * high. `slot` must be the top slot of x or
  /// above it (in which case high is zero).
  std::pair<Jet, Jet> split(int slot) const;

  /// Returns low + eps_slot * high; both operands must have order <= slot.
  static Jet join(const Jet& low, const Jet& high, int slot);

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator*=(double s);

  Jet operator-() const;

  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs);
  friend Jet operator+(Jet lhs, double rhs) { return lhs += Jet(rhs); }
  friend Jet operator+(double lhs, Jet rhs) { return rhs += Jet(lhs); }
  friend Jet operator-(Jet lhs, double rhs) { return lhs -= Jet(rhs); }
  friend Jet operator-(double lhs, const Jet& rhs) { return Jet(lhs) - rhs; }
  friend Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
  friend Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
  friend Jet operator/(Jet lhs, double rhs) { return lhs *= 1.0 / rhs; }
  friend Jet operator/(double lhs, const Jet& rhs) { return Jet(lhs) / rhs; }

  // Comparisons look at the real part only.
  friend bool operator<(const Jet& a, const Jet& b) { return a.value() < b.value(); }
  friend bool operator>(const Jet& a, const Jet& b) { return a.value() > b.value(); }
  friend bool operator<=(const Jet& a, const Jet& b) { return a.value() <= b.value(); }
  friend bool operator>=(const Jet& a, const Jet& b) { return a.value() >= b.value(); }
  friend bool operator==(const Jet& a, const Jet& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

  /// f(x) from the Taylor coefficients f^(j)(x0)/j!, j = 0..order.
  Jet compose(const std::vector<double>& taylor) const;

 private:
  void grow(std::size_t n) {
    if (coeffs_.size() < n) coeffs_.resize(n, 0.0);
  }

  std::vector<double> coeffs_{0.0};
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet abs(const Jet& x);

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

using JetVector = Eigen::Matrix<Jet, Eigen::Dynamic, 1>;

/// Highest infinitesimal slot in use by any component, plus one.
int jet_order(const JetVector& x);

JetVector to_jets(const Eigen::VectorXd& x);
Eigen::VectorXd values_of(const JetVector& x);

}  // namespace dsoar

namespace Eigen {

template <>
struct NumTraits<dsoar::Jet> : GenericNumTraits<dsoar::Jet> {
  using Real = dsoar::Jet;
  using NonInteger = dsoar::Jet;
  using Nested = dsoar::Jet;
  using Literal = dsoar::Jet;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 8,
    MulCost = 16
  };

  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

}  // namespace Eigen
