#include "dsoar/systems.hpp"

#include <stdexcept>

namespace dsoar {

namespace {

template <typename S>
using DynVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <typename S>
StateVector<S> fixed(const DynVec<S>& x) {
  if (x.size() != kStateDim) throw std::invalid_argument("glider state must have 7 entries");
  StateVector<S> s;
  for (int i = 0; i < kStateDim; ++i) s[i] = x[i];
  return s;
}

template <typename S>
DynVec<S> dynamic(const StateVector<S>& s) {
  DynVec<S> out(kStateDim);
  for (int i = 0; i < kStateDim; ++i) out[i] = s[i];
  return out;
}

}  // namespace

ControlAffineSystem dynamic_soaring_system(const BirdWindParams& p, const DriftOptions& opt) {
  p.validate();
  ControlAffineSystem sys;
  sys.name = "dynamic_soaring";
  sys.drift = make_vector_field("f", kStateDim, [p, opt](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    return dynamic<S>(drift_field<S>(fixed<S>(x), p, opt));
  });
  sys.controls.push_back(make_vector_field("b", kStateDim, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    return dynamic<S>(control_field<S>());
  }));
  return sys;
}

ControlAffineSystem ground_robot_system() {
  ControlAffineSystem sys;
  sys.name = "ground_robot";
  sys.drift = make_vector_field("f", 3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(3);
    out << S(0.0), S(0.0), S(0.0);
    return out;
  });
  sys.controls.push_back(make_vector_field("b1", 3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    using std::cos;
    using std::sin;
    DynVec<S> out(3);
    out << cos(x[2]), sin(x[2]), S(0.0);
    return out;
  }));
  sys.controls.push_back(make_vector_field("b2", 3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(3);
    out << S(0.0), S(0.0), S(1.0);
    return out;
  }));
  return sys;
}

ControlAffineSystem example2_system() {
  ControlAffineSystem sys;
  sys.name = "example2";
  sys.drift = make_vector_field("f", 2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(2);
    out << S(0.0), x[0] * x[0];
    return out;
  });
  sys.controls.push_back(make_vector_field("b", 2, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(2);
    out << S(1.0), S(0.0);
    return out;
  }));
  return sys;
}

ControlAffineSystem driftless_system() {
  ControlAffineSystem sys;
  sys.name = "driftless";
  sys.drift = make_vector_field("f", 3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(3);
    out << S(0.0), S(0.0), S(0.0);
    return out;
  });
  sys.controls.push_back(make_vector_field("b", 3, [](const auto& x) {
    using S = typename std::decay_t<decltype(x)>::Scalar;
    DynVec<S> out(3);
    out << S(1.0), S(0.0), x[0] * x[0];
    return out;
  }));
  return sys;
}

std::vector<FormalBracket> ds_distribution(bool include_fb) {
  std::vector<FormalBracket> out{FormalBracket::leaf(0), FormalBracket::leaf(1)};
  for (int k = include_fb ? 1 : 2; k <= 5; ++k) out.push_back(FormalBracket::ad_drift(k));
  return out;
}

FormalBracket ds_bad_bracket() { return FormalBracket::parse("[b,[f,b]]"); }

NamedFixture make_fixture(const std::string& name, const BirdWindParams& p,
                          const DriftOptions& opt, const FlightState& ds_x0) {
  NamedFixture fx;
  fx.system = name;
  if (name == "dynamic_soaring") {
    fx.fields = dynamic_soaring_system(p, opt);
    fx.x0 = dynamic<double>(ds_x0.to_vector());
    fx.distribution = ds_distribution(true);
    fx.bad = ds_bad_bracket();
  } else if (name == "ground_robot") {
    fx.fields = ground_robot_system();
    fx.x0 = Eigen::VectorXd::Zero(3);
    fx.distribution = {FormalBracket::parse("b1", 2), FormalBracket::parse("b2", 2),
                       FormalBracket::parse("[b1,b2]", 2)};
    fx.notes.push_back(
        "[b1,b2] = (sin th, -cos th, 0) under [F,G] = DG F - DF G; the opposite sign of the "
        "second entry leaves the span unchanged");
  } else if (name == "example2") {
    fx.fields = example2_system();
    fx.x0 = Eigen::VectorXd::Zero(2);
    fx.distribution = {FormalBracket::parse("b"), FormalBracket::parse("[[f,b],b]")};
    fx.bad = FormalBracket::parse("[[f,b],b]");
    fx.notes.push_back("b = (1, 0) as in the system definition xdot = u, ydot = x^2");
  } else if (name == "driftless") {
    fx.fields = driftless_system();
    fx.x0 = Eigen::VectorXd::Zero(3);
    fx.distribution = {FormalBracket::leaf(1)};
    fx.bad = ds_bad_bracket();
  } else {
    throw std::invalid_argument("larc.system: unknown fixture '" + name +
                                "' (expected dynamic_soaring, ground_robot, example2, driftless)");
  }
  return fx;
}

}  // namespace dsoar
