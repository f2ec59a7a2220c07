#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace fracvar {

/// Variables a Lagrangian expression may reference: the abscissa x, the
/// trajectory value y, and the left/right Caputo derivative slots v and w.
enum class Var { X, Y, V, W };

const char* var_name(Var v);

/// Lookup for named coefficient functions referenced as "coeff:<name>".
using CoeffLookup =
    std::function<double(std::string_view name, double x)>;

struct EvalContext {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double w = 0.0;
  const CoeffLookup* coeffs = nullptr;
};

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

/// Immutable expression tree over {x, y, v, w}, named coefficients,
/// arithmetic, a few unary functions, and the Mittag-Leffler call
/// ml(order, argument). Value type; copies share structure.
class Expression {
 public:
  /// Parses the grammar
  ///   expr   := term (('+'|'-') term)*
  ///   term   := factor (('*'|'/') factor)*
  ///   factor := '-' factor | power
  ///   power  := atom ('^' factor)?        (right associative)
  ///   atom   := number | x|y|v|w | fn '(' expr ')' | ml '(' expr ',' expr ')'
  ///           | coeff ':' name | '(' expr ')'
  /// with fn one of sin, cos, exp, ln, sqrt, abs. Throws ParseError with a
  /// byte offset; inputs above 64 KiB are rejected.
  static Expression parse(std::string_view src);

  static Expression constant(double value);
  static Expression variable(Var v);
  static Expression coefficient(std::string name);

  Expression operator+(const Expression& rhs) const;
  Expression operator-(const Expression& rhs) const;
  Expression operator*(const Expression& rhs) const;
  Expression operator/(const Expression& rhs) const;

  /// Zero- and one-pruning linear combination helpers (used to assemble
  /// augmented Lagrangians without disturbing either operand's tree).
  Expression scaled(double c) const;
  Expression plus(const Expression& rhs) const;

  double eval(const EvalContext& ctx) const;

  /// Exact partial derivative with respect to y, v, or w. Coefficient
  /// references are constants for these variables. Throws
  /// DifferentiationError when a Mittag-Leffler argument depends on the
  /// variable, and ArgumentError for wrt = x.
  Expression differentiate(Var wrt) const;

  std::string to_string() const;

  bool structurally_equal(const Expression& other) const;
  bool is_constant() const;
  bool is_zero() const;
  double constant_value() const;  // requires is_constant()

  bool uses_variable(Var v) const;
  std::set<std::string> coefficient_names() const;

  const detail::NodePtr& node() const { return node_; }

 private:
  explicit Expression(detail::NodePtr node) : node_(std::move(node)) {}
  detail::NodePtr node_;
};

}  // namespace fracvar
