#include "dsoar/jet.hpp"

#include <bit>
#include <stdexcept>

namespace dsoar {

int Jet::order() const {
  return std::countr_zero(coeffs_.size());
}

std::pair<Jet, Jet> Jet::split(int slot) const {
  const std::size_t half = std::size_t{1} << slot;
  if (coeffs_.size() <= half) return {*this, Jet()};
  if (coeffs_.size() != 2 * half) {
    throw std::logic_error("Jet::split: slot is below the top infinitesimal");
  }
  Jet low;
  Jet high;
  low.coeffs_.assign(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(half));
  high.coeffs_.assign(coeffs_.begin() + static_cast<std::ptrdiff_t>(half), coeffs_.end());
  return {std::move(low), std::move(high)};
}

Jet Jet::join(const Jet& low, const Jet& high, int slot) {
  if (slot >= kMaxOrder) throw std::length_error("Jet: too many nested infinitesimals");
  const std::size_t half = std::size_t{1} << slot;
  if (low.size() > half || high.size() > half) {
    throw std::logic_error("Jet::join: operand already uses the requested slot");
  }
  Jet out;
  out.coeffs_.assign(2 * half, 0.0);
  std::copy(low.coeffs_.begin(), low.coeffs_.end(), out.coeffs_.begin());
  std::copy(high.coeffs_.begin(), high.coeffs_.end(),
            out.coeffs_.begin() + static_cast<std::ptrdiff_t>(half));
  return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
  grow(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  grow(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet Jet::operator-() const {
  Jet out(*this);
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (lhs.size() == 1) return rhs * lhs.coeffs_[0];
  if (rhs.size() == 1) return lhs * rhs.coeffs_[0];
  const std::size_t n = std::max(lhs.size(), rhs.size());
  Jet out;
  out.coeffs_.assign(n, 0.0);
  // Sum over submasks a of r: x[a] * y[r ^ a].
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t a = r;; a = (a - 1) & r) {
      acc += lhs.coeff(a) * rhs.coeff(r ^ a);
      if (a == 0) break;
    }
    out.coeffs_[r] = acc;
  }
  return out;
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
  if (rhs.size() == 1) return lhs * (1.0 / rhs.coeffs_[0]);
  const double v = rhs.value();
  const int k = rhs.order();
  std::vector<double> taylor(static_cast<std::size_t>(k) + 1);
  double p = 1.0 / v;
  for (int j = 0; j <= k; ++j) {
    taylor[static_cast<std::size_t>(j)] = p;
    p *= -1.0 / v;
  }
  return lhs * rhs.compose(taylor);
}

Jet Jet::compose(const std::vector<double>& taylor) const {
  const int k = order();
  if (k == 0) return Jet(taylor.at(0));
  if (taylor.size() < static_cast<std::size_t>(k) + 1) {
    throw std::logic_error("Jet::compose: not enough Taylor coefficients");
  }
  Jet nil(*this);
  nil.coeffs_[0] = 0.0;
  Jet out(taylor[static_cast<std::size_t>(k)]);
  for (int j = k - 1; j >= 0; --j) {
    out = out * nil;
    out.coeffs_[0] += taylor[static_cast<std::size_t>(j)];
  }
  return out;
}

namespace {

std::vector<double> sin_cos_taylor(double v, int k, bool cosine) {
  // d^j/dx^j sin = sin(x + j*pi/2).
  const double s = std::sin(v);
  const double c = std::cos(v);
  const double cycle_sin[4] = {s, c, -s, -c};
  const double cycle_cos[4] = {c, -s, -c, s};
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    t[static_cast<std::size_t>(j)] = (cosine ? cycle_cos[j % 4] : cycle_sin[j % 4]) / fact;
  }
  return t;
}

}  // namespace

Jet sin(const Jet& x) { return x.compose(sin_cos_taylor(x.value(), x.order(), false)); }
Jet cos(const Jet& x) { return x.compose(sin_cos_taylor(x.value(), x.order(), true)); }
Jet tan(const Jet& x) { return sin(x) / cos(x); }

Jet exp(const Jet& x) {
  const int k = x.order();
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  double term = std::exp(x.value());
  for (int j = 0; j <= k; ++j) {
    if (j > 0) term /= j;
    t[static_cast<std::size_t>(j)] = term;
  }
  return x.compose(t);
}

Jet log(const Jet& x) {
  const double v = x.value();
  const int k = x.order();
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  t[0] = std::log(v);
  double p = 1.0;
  for (int j = 1; j <= k; ++j) {
    p /= v;
    t[static_cast<std::size_t>(j)] = ((j % 2 == 1) ? 1.0 : -1.0) * p / j;
  }
  return x.compose(t);
}

Jet sqrt(const Jet& x) {
  const double v = x.value();
  const int k = x.order();
  std::vector<double> t(static_cast<std::size_t>(k) + 1);
  // sqrt(v) * binom(1/2, j) / v^j
  double binom = 1.0;
  double p = std::sqrt(v);
  for (int j = 0; j <= k; ++j) {
    if (j > 0) {
      binom *= (0.5 - (j - 1)) / j;
      p /= v;
    }
    t[static_cast<std::size_t>(j)] = binom * p;
  }
  return x.compose(t);
}

Jet abs(const Jet& x) { return x.value() < 0.0 ? -x : x; }

int jet_order(const JetVector& x) {
  int k = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) k = std::max(k, x[i].order());
  return k;
}

JetVector to_jets(const Eigen::VectorXd& x) {
  JetVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Jet(x[i]);
  return out;
}

Eigen::VectorXd values_of(const JetVector& x) {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i].value();
  return out;
}

}  // namespace dsoar
