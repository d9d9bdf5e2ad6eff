#include "dsoar/lie.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace dsoar {

const VectorField& ControlAffineSystem::field(int symbol) const {
  if (symbol == 0) return drift;
  if (symbol < 0 || symbol > num_controls()) {
    throw std::invalid_argument("system '" + name + "' has no control field b" +
                                std::to_string(symbol));
  }
  return controls[static_cast<std::size_t>(symbol - 1)];
}

// ---------------------------------------------------------------- FormalBracket

struct FormalBracket::Node {
  int symbol = -1;  // -1 for an inner node
  FormalBracket lhs{nullptr};
  FormalBracket rhs{nullptr};
};

FormalBracket FormalBracket::leaf(int symbol) {
  if (symbol < 0) throw std::invalid_argument("bracket symbol must be >= 0");
  auto n = std::make_shared<Node>();
  n->symbol = symbol;
  return FormalBracket(std::move(n));
}

FormalBracket FormalBracket::bracket(const FormalBracket& lhs, const FormalBracket& rhs) {
  auto n = std::make_shared<Node>();
  n->lhs = lhs;
  n->rhs = rhs;
  return FormalBracket(std::move(n));
}

FormalBracket FormalBracket::ad_drift(int k, int control) {
  if (k < 0) throw std::invalid_argument("ad power must be >= 0");
  FormalBracket out = leaf(control);
  for (int i = 0; i < k; ++i) out = bracket(leaf(0), out);
  return out;
}

bool FormalBracket::is_leaf() const { return node_->symbol >= 0; }
int FormalBracket::symbol() const { return node_->symbol; }
const FormalBracket& FormalBracket::lhs() const { return node_->lhs; }
const FormalBracket& FormalBracket::rhs() const { return node_->rhs; }

int FormalBracket::depth() const {
  if (is_leaf()) return 0;
  return 1 + std::max(lhs().depth(), rhs().depth());
}

int FormalBracket::length() const {
  if (is_leaf()) return 1;
  return lhs().length() + rhs().length();
}

int FormalBracket::count(int symbol) const {
  if (is_leaf()) return node_->symbol == symbol ? 1 : 0;
  return lhs().count(symbol) + rhs().count(symbol);
}

long FormalBracket::weight(std::span<const int> w) const {
  if (is_leaf()) {
    const auto s = static_cast<std::size_t>(node_->symbol);
    if (s >= w.size()) throw std::invalid_argument("weight vector is too short for symbol");
    return w[s];
  }
  return lhs().weight(w) + rhs().weight(w);
}

bool FormalBracket::is_potential_obstruction(int num_controls) const {
  if (is_leaf()) return false;
  if (count(0) % 2 == 0) return false;
  for (int a = 1; a <= num_controls; ++a) {
    if (count(a) % 2 != 0) return false;
  }
  return true;
}

std::string FormalBracket::to_string(int num_controls) const {
  if (!is_leaf()) {
    return "[" + lhs().to_string(num_controls) + "," + rhs().to_string(num_controls) + "]";
  }
  if (node_->symbol == 0) return "f";
  if (num_controls == 1 && node_->symbol == 1) return "b";
  return "b" + std::to_string(node_->symbol);
}

bool operator==(const FormalBracket& a, const FormalBracket& b) {
  if (a.is_leaf() || b.is_leaf()) return a.is_leaf() == b.is_leaf() && a.symbol() == b.symbol();
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

namespace {

class BracketParser {
 public:
  BracketParser(std::string_view text, int num_controls)
      : text_(text), num_controls_(num_controls) {}

  FormalBracket run() {
    FormalBracket out = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("bracket '" + std::string(text_) + "': " + what + " at position " +
                                std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  FormalBracket expr() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '[') {
      ++pos_;
      FormalBracket lhs = expr();
      expect(',');
      FormalBracket rhs = expr();
      expect(']');
      return FormalBracket::bracket(lhs, rhs);
    }
    if (text_[pos_] == 'f') {
      ++pos_;
      return FormalBracket::leaf(0);
    }
    if (text_[pos_] == 'b') {
      ++pos_;
      int index = 0;
      bool digits = false;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        index = index * 10 + (text_[pos_] - '0');
        digits = true;
        ++pos_;
        if (index > 1000) fail("control index too large");
      }
      if (!digits) index = 1;
      if (index < 1 || index > num_controls_) {
        fail("control b" + std::to_string(index) + " does not exist (system has " +
             std::to_string(num_controls_) + ")");
      }
      return FormalBracket::leaf(index);
    }
    fail(std::string("unexpected character '") + text_[pos_] + "'");
  }

  std::string_view text_;
  int num_controls_;
  std::size_t pos_ = 0;
};

}  // namespace

FormalBracket FormalBracket::parse(std::string_view text, int num_controls) {
  return BracketParser(text, num_controls).run();
}

// ------------------------------------------------------------ finite differences

Eigen::MatrixXd numeric_jacobian(const VectorField& F, const Eigen::VectorXd& x, double eps,
                                 bool richardson) {
  const Eigen::Index n = x.size();
  const Eigen::VectorXd f0 = F(x);
  Eigen::MatrixXd J(f0.size(), n);
  auto central = [&](Eigen::Index i, double h) -> Eigen::VectorXd {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[i] += h;
    xm[i] -= h;
    return (F(xp) - F(xm)) / (2.0 * h);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = eps * std::max(1.0, std::abs(x[i]));
    if (richardson) {
      J.col(i) = (4.0 * central(i, 0.5 * h) - central(i, h)) / 3.0;
    } else {
      J.col(i) = central(i, h);
    }
  }
  return J;
}

Eigen::VectorXd lie_bracket(const VectorField& F, const VectorField& G, const Eigen::VectorXd& x,
                            double eps) {
  return numeric_jacobian(G, x, eps) * F(x) - numeric_jacobian(F, x, eps) * G(x);
}

// ------------------------------------------------------------------ Taylor scheme

namespace {

JetVector perturb(const JetVector& x, const JetVector& v, int slot) {
  JetVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = Jet::join(x[i], v[i], slot);
  return out;
}

JetVector high_part(const JetVector& y, int slot) {
  JetVector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i].split(slot).second;
  return out;
}

JetVector low_part(const JetVector& y, int slot) {
  JetVector out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out[i] = y[i].split(slot).first;
  return out;
}

using JetMap = std::function<JetVector(const JetVector&)>;

// [F,G](x) = DG(x) F(x) - DF(x) G(x); three evaluations.
JetVector taylor_bracket(const JetMap& F, const JetMap& G, const JetVector& x) {
  const int slot = jet_order(x);
  const JetVector gx = G(x);
  const JetVector f_along_g = F(perturb(x, gx, slot));
  const JetVector fx = low_part(f_along_g, slot);
  const JetVector df_g = high_part(f_along_g, slot);
  const JetVector dg_f = high_part(G(perturb(x, fx, slot)), slot);
  return dg_f - df_g;
}

JetVector eval_taylor(const FormalBracket& e, const ControlAffineSystem& sys, const JetVector& x) {
  if (e.is_leaf()) return sys.field(e.symbol()).eval_jet(x);
  return taylor_bracket([&](const JetVector& y) { return eval_taylor(e.lhs(), sys, y); },
                        [&](const JetVector& y) { return eval_taylor(e.rhs(), sys, y); }, x);
}

// -------------------------------------------------------- nested central differences

Eigen::VectorXd eval_fd(const FormalBracket& e, const ControlAffineSystem& sys,
                        const Eigen::VectorXd& x, const DifferentiationConfig& cfg);

// d/dt E(x + t v) at t = 0 with a step scaled to the state and widened by depth.
Eigen::VectorXd directional_fd(const FormalBracket& e, const ControlAffineSystem& sys,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& v,
                               const DifferentiationConfig& cfg) {
  double speed = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    speed = std::max(speed, std::abs(v[i]) / std::max(1.0, std::abs(x[i])));
  }
  if (speed == 0.0) return Eigen::VectorXd::Zero(sys.dim());
  const double t = cfg.base_step * std::pow(cfg.widen, e.depth()) / speed;
  auto central = [&](double h) -> Eigen::VectorXd {
    return (eval_fd(e, sys, x + h * v, cfg) - eval_fd(e, sys, x - h * v, cfg)) / (2.0 * h);
  };
  return (4.0 * central(0.5 * t) - central(t)) / 3.0;
}

Eigen::VectorXd eval_fd(const FormalBracket& e, const ControlAffineSystem& sys,
                        const Eigen::VectorXd& x, const DifferentiationConfig& cfg) {
  if (e.is_leaf()) return sys.field(e.symbol()).eval(x);
  const Eigen::VectorXd fx = eval_fd(e.lhs(), sys, x, cfg);
  const Eigen::VectorXd gx = eval_fd(e.rhs(), sys, x, cfg);
  return directional_fd(e.rhs(), sys, x, fx, cfg) - directional_fd(e.lhs(), sys, x, gx, cfg);
}

void check_expression(const FormalBracket& expr, const ControlAffineSystem& sys, int max_depth) {
  if (expr.depth() > max_depth) {
    throw std::invalid_argument("bracket " + expr.to_string(sys.num_controls()) + " has depth " +
                                std::to_string(expr.depth()) + " > max " +
                                std::to_string(max_depth));
  }
}

}  // namespace

VectorField lie_bracket_field(const VectorField& F, const VectorField& G) {
  if (F.dim != G.dim) throw std::invalid_argument("lie_bracket_field: dimension mismatch");
  VectorField out;
  out.name = "[" + F.name + "," + G.name + "]";
  out.dim = F.dim;
  out.eval_jet = [F, G](const JetVector& x) {
    return taylor_bracket(F.eval_jet, G.eval_jet, x);
  };
  out.eval = [jet = out.eval_jet](const Eigen::VectorXd& x) { return values_of(jet(to_jets(x))); };
  return out;
}

Eigen::VectorXd nested_bracket(const FormalBracket& expr, const ControlAffineSystem& sys,
                               const Eigen::VectorXd& x, const DifferentiationConfig& cfg) {
  check_expression(expr, sys, cfg.max_depth);
  if (x.size() != sys.dim()) {
    throw std::invalid_argument("state has dimension " + std::to_string(x.size()) +
                                ", system expects " + std::to_string(sys.dim()));
  }
  if (cfg.scheme == DiffScheme::kTaylor) return values_of(eval_taylor(expr, sys, to_jets(x)));
  return eval_fd(expr, sys, x, cfg);
}

JetVector nested_bracket(const FormalBracket& expr, const ControlAffineSystem& sys,
                         const JetVector& x) {
  return eval_taylor(expr, sys, x);
}

// ---------------------------------------------------------------------- LARC

namespace {

struct NormalizedSvd {
  std::vector<double> singular_values;
  int rank = 0;
};

NormalizedSvd normalized_svd(const std::vector<Eigen::VectorXd>& cols, double rank_tol) {
  NormalizedSvd out;
  if (cols.empty()) return out;
  Eigen::MatrixXd M(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    M.col(static_cast<Eigen::Index>(j)) = cols[j].normalized();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const Eigen::VectorXd& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) out.singular_values.push_back(s[i]);
  if (s.size() == 0 || s[0] == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] / s[0] > rank_tol) ++out.rank;
  }
  return out;
}

std::vector<Eigen::VectorXd> nonzero_columns(const std::vector<Eigen::VectorXd>& columns,
                                             double zero_tol) {
  double max_norm = 0.0;
  for (const auto& c : columns) max_norm = std::max(max_norm, c.norm());
  const double floor = zero_tol * std::max(1.0, max_norm);
  std::vector<Eigen::VectorXd> kept;
  for (const auto& c : columns) {
    if (c.allFinite() && c.norm() > floor) kept.push_back(c);
  }
  return kept;
}

}  // namespace

double LarcReport::smallest_ratio() const {
  if (singular_values.empty() || singular_values.front() == 0.0) return 0.0;
  return singular_values.back() / singular_values.front();
}

int normalized_rank(const std::vector<Eigen::VectorXd>& columns, double rank_tol,
                    double zero_tol) {
  return normalized_svd(nonzero_columns(columns, zero_tol), rank_tol).rank;
}

LarcReport larc_rank(const std::vector<FormalBracket>& brackets, const ControlAffineSystem& sys,
                     const Eigen::VectorXd& x0, const LarcOptions& opt) {
  if (brackets.empty()) throw std::invalid_argument("larc_rank: no brackets given");
  LarcReport report;
  report.dim = sys.dim();

  double max_norm = 0.0;
  for (const auto& b : brackets) {
    BracketColumn col;
    col.name = b.to_string(sys.num_controls());
    col.value = nested_bracket(b, sys, x0, opt.diff);
    if (!col.value.allFinite()) {
      report.numeric_breakdown = true;
      report.notes.push_back(col.name + ": non-finite value");
    }
    col.norm = col.value.norm();
    if (std::isfinite(col.norm)) max_norm = std::max(max_norm, col.norm);
    report.columns.push_back(std::move(col));
  }

  const double floor = opt.zero_tol * std::max(1.0, max_norm);
  std::vector<Eigen::VectorXd> kept;
  for (auto& col : report.columns) {
    col.dropped = !col.value.allFinite() || col.norm <= floor;
    if (!col.dropped) kept.push_back(col.value);
  }

  if (opt.cross_check) {
    DifferentiationConfig other = opt.diff;
    other.scheme = opt.diff.scheme == DiffScheme::kTaylor ? DiffScheme::kCentralRichardson
                                                          : DiffScheme::kTaylor;
    for (std::size_t j = 0; j < brackets.size(); ++j) {
      auto& col = report.columns[j];
      const Eigen::VectorXd alt = nested_bracket(brackets[j], sys, x0, other);
      const double denom = std::max({col.norm, 1e-8 * max_norm, 1e-300});
      const double rel = (col.value - alt).norm() / denom;
      col.scheme_disagreement = rel;
      if (!(rel <= opt.agreement_tol)) {
        report.numeric_breakdown = true;
        report.notes.push_back(col.name + ": schemes disagree (relative " + std::to_string(rel) +
                               ")");
      }
    }
  }

  const NormalizedSvd svd = normalized_svd(kept, opt.rank_tol);
  report.singular_values = svd.singular_values;
  report.rank = svd.rank;
  report.full_rank = report.rank == report.dim;
  return report;
}

BadBracketStatus bad_bracket_check(const FormalBracket& bad,
                                   const std::vector<FormalBracket>& distribution,
                                   const ControlAffineSystem& sys, const Eigen::VectorXd& x0,
                                   const BadBracketOptions& opt) {
  const int m = sys.num_controls();
  BadBracketStatus st;
  st.name = bad.to_string(m);
  st.value = nested_bracket(bad, sys, x0, opt.larc.diff);
  st.norm = st.value.norm();

  std::vector<Eigen::VectorXd> all;
  std::vector<Eigen::VectorXd> good;
  double max_norm = 0.0;
  for (const auto& b : distribution) {
    Eigen::VectorXd v = nested_bracket(b, sys, x0, opt.larc.diff);
    max_norm = std::max(max_norm, v.norm());
    if (!b.is_potential_obstruction(m)) good.push_back(v);
    all.push_back(std::move(v));
  }
  st.relative_norm = max_norm > 0.0 ? st.norm / max_norm : 0.0;
  st.nonvanishing = st.norm > opt.vanish_tol * max_norm;

  const std::vector<Eigen::VectorXd> kept = nonzero_columns(all, opt.larc.zero_tol);
  if (st.norm > 0.0 && !kept.empty()) {
    Eigen::MatrixXd A(sys.dim(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) {
      A.col(static_cast<Eigen::Index>(j)) = kept[j].normalized();
    }
    const Eigen::VectorXd target = st.value / st.norm;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(opt.larc.rank_tol);
    const Eigen::VectorXd coef = svd.solve(target);
    st.projection_residual = (A * coef - target).norm();
  } else if (st.norm == 0.0) {
    st.projection_residual = 0.0;
  }
  st.in_span = st.projection_residual <= opt.span_tol;

  st.good_rank = normalized_rank(good, opt.larc.rank_tol, opt.larc.zero_tol);
  std::vector<Eigen::VectorXd> with_bad = all;
  with_bad.push_back(st.value);
  st.rank_with_bad = normalized_rank(with_bad, opt.larc.rank_tol, opt.larc.zero_tol);
  st.needed_for_span = st.nonvanishing && st.rank_with_bad > st.good_rank;
  return st;
}

// -------------------------------------------------------------------- weights

NeutralizationStatus check_neutralization(const FormalBracket& bad,
                                          const std::vector<FormalBracket>& good,
                                          std::span<const int> weights, int num_controls) {
  if (weights.size() != static_cast<std::size_t>(num_controls) + 1) {
    throw std::invalid_argument("weights: expected " + std::to_string(num_controls + 1) +
                                " entries");
  }
  NeutralizationStatus st;
  st.weights.assign(weights.begin(), weights.end());
  st.admissible = true;
  for (int w : weights) {
    if (w < 1) throw std::invalid_argument("weights: must be >= 1");
  }
  for (int a = 1; a <= num_controls; ++a) {
    if (weights[static_cast<std::size_t>(a)] < weights[0]) st.admissible = false;
  }
  const long bad_w = bad.weight(weights);
  st.passed = true;
  for (const auto& b : good) {
    WeightInequality q{b.to_string(num_controls), bad_w, b.weight(weights), false};
    q.holds = q.bad_weight > q.bracket_weight;
    st.passed = st.passed && q.holds;
    st.inequalities.push_back(std::move(q));
  }
  return st;
}

NeutralizationStatus weight_neutralization(int w0, int w) {
  const FormalBracket bad = FormalBracket::parse("[b,[f,b]]");
  std::vector<FormalBracket> good;
  for (int k = 2; k <= 5; ++k) good.push_back(FormalBracket::ad_drift(k));
  const int weights[] = {w0, w};
  return check_neutralization(bad, good, weights, 1);
}

std::optional<std::pair<int, int>> find_admissible_weight(int max_w0, int max_w) {
  for (int w0 = 1; w0 <= max_w0; ++w0) {
    for (int w = w0; w <= max_w; ++w) {
      const NeutralizationStatus st = weight_neutralization(w0, w);
      if (st.admissible && st.passed) return std::make_pair(w0, w);
    }
  }
  return std::nullopt;
}

}  // namespace dsoar
