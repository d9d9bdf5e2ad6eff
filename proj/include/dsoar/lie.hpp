#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dsoar/jet.hpp"

namespace dsoar {

/// A smooth map R^n -> R^n, callable on plain doubles and on Jets.
struct VectorField {
  std::string name;
  int dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::function<JetVector(const JetVector&)> eval_jet;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return eval(x); }
  JetVector operator()(const JetVector& x) const { return eval_jet(x); }
};

/// Wraps a generic callable `f(const Eigen::Matrix<S, Dynamic, 1>&)`
/// so it can be evaluated on both scalar types.
template <typename F>
VectorField make_vector_field(std::string name, int dim, F f) {
  return {std::move(name), dim,
          [f](const Eigen::VectorXd& x) -> Eigen::VectorXd { return f(x); },
          [f](const JetVector& x) -> JetVector { return f(x); }};
}

/// A smooth output map R^n -> R.
struct ScalarField {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> eval;
  std::function<Jet(const JetVector&)> eval_jet;
};

template <typename F>
ScalarField make_scalar_field(std::string name, F f) {
  return {std::move(name), [f](const Eigen::VectorXd& x) -> double { return f(x); },
          [f](const JetVector& x) -> Jet { return f(x); }};
}

/// xdot = f(x) + sum_a u_a b_a(x).
struct ControlAffineSystem {
  std::string name;
  VectorField drift;
  std::vector<VectorField> controls;

  int dim() const { return drift.dim; }
  int num_controls() const { return static_cast<int>(controls.size()); }
  /// Symbol 0 is the drift, symbol a >= 1 is b_a.
  const VectorField& field(int symbol) const;
};

/// Iterated Lie bracket as data: a binary tree over {f, b_1, ..., b_m}.
class FormalBracket {
 public:
  static FormalBracket leaf(int symbol);
  static FormalBracket bracket(const FormalBracket& lhs, const FormalBracket& rhs);
  /// ad_f^k b_j = [f, ad_f^{k-1} b_j]; ad^0 is b_j itself.
  static FormalBracket ad_drift(int k, int control = 1);

  /// Parses "f", "b", "b2", "[f,[f,b]]". "b" means b_1.
  /// Throws std::invalid_argument with the offending position.
  static FormalBracket parse(std::string_view text, int num_controls = 1);

  bool is_leaf() const;
  int symbol() const;
  const FormalBracket& lhs() const;
  const FormalBracket& rhs() const;

  /// Bracket nesting depth; a bare field has depth 0.
  int depth() const;
  /// Number of leaves.
  int length() const;
  /// |B|_i: occurrences of symbol i (0 = drift).
  int count(int symbol) const;
  /// sum_i w_i |B|_i, with w indexed by symbol.
  long weight(std::span<const int> w) const;
  /// |B|_0 odd and every |B|_a even, excluding the bare drift itself.
  bool is_potential_obstruction(int num_controls) const;

  std::string to_string(int num_controls = 1) const;

  friend bool operator==(const FormalBracket& a, const FormalBracket& b);

 private:
  struct Node;
  explicit FormalBracket(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Central-difference Jacobian with h_i = eps * max(1, |x_i|), optionally
/// one Richardson extrapolation (h, h/2).
Eigen::MatrixXd numeric_jacobian(const VectorField& F, const Eigen::VectorXd& x,
                                 double eps = 1e-6, bool richardson = false);

/// [F,G](x) = (dG/dx) F - (dF/dx) G using central-difference Jacobians.
Eigen::VectorXd lie_bracket(const VectorField& F, const VectorField& G, const Eigen::VectorXd& x,
                            double eps = 1e-6);

/// [F,G] as a new field, differentiated exactly with Taylor arithmetic, so
/// it nests to any depth.
VectorField lie_bracket_field(const VectorField& F, const VectorField& G);

enum class DiffScheme {
  kTaylor,             ///< nested forward-mode directional derivatives (exact)
  kCentralRichardson,  ///< nested central differences with one Richardson step
};

struct DifferentiationConfig {
  DiffScheme scheme = DiffScheme::kTaylor;
  int max_depth = 6;
  /// Relative step for differentiating a bare field (finite differences only).
  double base_step = 2e-3;
  /// Step growth per nesting level of the expression being differentiated.
  double widen = 2.2;
};

/// Evaluates `expr` at x. Throws std::invalid_argument when the expression
/// is deeper than cfg.max_depth or names a control the system lacks.
Eigen::VectorXd nested_bracket(const FormalBracket& expr, const ControlAffineSystem& sys,
                               const Eigen::VectorXd& x, const DifferentiationConfig& cfg = {});

/// Same evaluation on a Jet-valued state (Taylor scheme only).
JetVector nested_bracket(const FormalBracket& expr, const ControlAffineSystem& sys,
                         const JetVector& x);

struct LarcOptions {
  double rank_tol = 1e-8;          ///< sigma_i / sigma_1 threshold
  double zero_tol = 1e-12;         ///< columns with norm below this (relative) are dropped
  DifferentiationConfig diff;
  bool cross_check = true;         ///< re-evaluate every bracket with the other scheme
  double agreement_tol = 1e-3;     ///< relative disagreement that flags breakdown
};

struct BracketColumn {
  std::string name;
  Eigen::VectorXd value;
  double norm = 0.0;
  bool dropped = false;
  std::optional<double> scheme_disagreement;
};

struct LarcReport {
  int dim = 0;
  std::vector<BracketColumn> columns;
  std::vector<double> singular_values;  ///< of the unit-normalized columns, descending
  int rank = 0;
  bool full_rank = false;
  bool numeric_breakdown = false;
  std::vector<std::string> notes;

  /// sigma_min / sigma_1 over the kept columns (0 when nothing survives).
  double smallest_ratio() const;
};

LarcReport larc_rank(const std::vector<FormalBracket>& brackets, const ControlAffineSystem& sys,
                     const Eigen::VectorXd& x0, const LarcOptions& opt = {});

/// Rank of column-normalized vectors; zero columns are ignored.
int normalized_rank(const std::vector<Eigen::VectorXd>& columns, double rank_tol = 1e-8,
                    double zero_tol = 1e-12);

struct BadBracketStatus {
  std::string name;
  Eigen::VectorXd value;
  double norm = 0.0;
  double relative_norm = 0.0;  ///< against the largest distribution column
  bool nonvanishing = false;
  double projection_residual = 1.0;  ///< of the unit bad vector onto the distribution
  bool in_span = false;
  int good_rank = 0;           ///< rank of the distribution's non-obstruction brackets
  int rank_with_bad = 0;       ///< rank of the distribution plus the bad bracket
  bool needed_for_span = false;
};

struct BadBracketOptions {
  double vanish_tol = 1e-6;  ///< nonvanishing iff |B| > vanish_tol * max column norm
  double span_tol = 1e-6;
  LarcOptions larc;
};

BadBracketStatus bad_bracket_check(const FormalBracket& bad,
                                   const std::vector<FormalBracket>& distribution,
                                   const ControlAffineSystem& sys, const Eigen::VectorXd& x0,
                                   const BadBracketOptions& opt = {});

struct WeightInequality {
  std::string bracket;
  long bad_weight;
  long bracket_weight;
  bool holds;
};

struct NeutralizationStatus {
  std::vector<int> weights;
  bool admissible = false;  ///< w_a >= w_0 for every control (bounded controls)
  std::vector<WeightInequality> inequalities;
  bool passed = false;      ///< every inequality holds
};

/// ||bad||_w > ||B||_w for every B in `good`.
NeutralizationStatus check_neutralization(const FormalBracket& bad,
                                          const std::vector<FormalBracket>& good,
                                          std::span<const int> weights, int num_controls = 1);

/// Single-input glider case: [b,[f,b]] against ad_f^k b, k = 2..5.
NeutralizationStatus weight_neutralization(int w0, int w);

/// Lexicographically smallest (w0, w) with 1 <= w0 <= max_w0, w0 <= w <= max_w
/// that passes weight_neutralization.
std::optional<std::pair<int, int>> find_admissible_weight(int max_w0, int max_w);

}  // namespace dsoar
