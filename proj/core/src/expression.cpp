#include "fracvar/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

#include "fracvar/errors.hpp"
#include "fracvar/special_functions.hpp"

namespace fracvar {

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::V: return "v";
    case Var::W: return "w";
  }
  return "?";
}

namespace detail {

enum class Kind { Constant, Variable, Coefficient, Unary, Binary, Ml };
enum class UnaryOp { Neg, Sin, Cos, Exp, Ln, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node {
  Kind kind;
  double value = 0.0;        // Constant
  Var var = Var::X;          // Variable
  std::string coeff;         // Coefficient
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  double ml_alpha = 1.0;     // Ml
  NodePtr lhs;               // unary/ml argument or binary lhs
  NodePtr rhs;               // binary rhs
};

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make_variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = v;
  return n;
}

NodePtr make_coefficient(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Coefficient;
  n->coeff = std::move(name);
  return n;
}

bool is_const(const NodePtr& n, double* out = nullptr) {
  if (n->kind != Kind::Constant) return false;
  if (out != nullptr) *out = n->value;
  return true;
}

double eval_unary(UnaryOp op, double u);
double eval_binary(BinaryOp op, double a, double b);

// Folds all-constant applications when they evaluate cleanly; domain
// failures stay in the tree and surface at evaluation time.
NodePtr make_unary(UnaryOp op, NodePtr arg) {
  double u;
  if (is_const(arg, &u)) {
    try {
      const double r = eval_unary(op, u);
      if (std::isfinite(r)) return make_constant(r);
    } catch (const EvaluationError&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  double ca, cb;
  if (is_const(a, &ca) && is_const(b, &cb)) {
    try {
      const double r = eval_binary(op, ca, cb);
      if (std::isfinite(r)) return make_constant(r);
    } catch (const EvaluationError&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_ml(double alpha, NodePtr arg) {
  double u;
  if (is_const(arg, &u)) {
    try {
      const double r = mittag_leffler(alpha, u);
      if (std::isfinite(r)) return make_constant(r);
    } catch (const Error&) {
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ml;
  n->ml_alpha = alpha;
  n->lhs = std::move(arg);
  return n;
}

// Pruning constructors for derivative assembly: they drop exact zeros and
// unit factors so derivatives come out in their natural shape.
bool is_zero_node(const NodePtr& n) {
  return n->kind == Kind::Constant && n->value == 0.0;
}
bool is_one_node(const NodePtr& n) {
  return n->kind == Kind::Constant && n->value == 1.0;
}

NodePtr sum(NodePtr a, NodePtr b) {
  if (is_zero_node(a)) return b;
  if (is_zero_node(b)) return a;
  return make_binary(BinaryOp::Add, std::move(a), std::move(b));
}

NodePtr difference(NodePtr a, NodePtr b) {
  if (is_zero_node(b)) return a;
  if (is_zero_node(a)) return make_unary(UnaryOp::Neg, std::move(b));
  return make_binary(BinaryOp::Sub, std::move(a), std::move(b));
}

NodePtr product(NodePtr a, NodePtr b) {
  if (is_zero_node(a) || is_zero_node(b)) return make_constant(0.0);
  if (is_one_node(a)) return b;
  if (is_one_node(b)) return a;
  return make_binary(BinaryOp::Mul, std::move(a), std::move(b));
}

NodePtr quotient(NodePtr a, NodePtr b) {
  if (is_zero_node(a)) return make_constant(0.0);
  if (is_one_node(b)) return a;
  return make_binary(BinaryOp::Div, std::move(a), std::move(b));
}

double eval_unary(UnaryOp op, double u) {
  switch (op) {
    case UnaryOp::Neg: return -u;
    case UnaryOp::Sin: return std::sin(u);
    case UnaryOp::Cos: return std::cos(u);
    case UnaryOp::Exp: {
      const double r = std::exp(u);
      if (!std::isfinite(r)) throw EvaluationError("exp overflow");
      return r;
    }
    case UnaryOp::Ln:
      if (!(u > 0.0)) {
        throw EvaluationError("ln of non-positive value " + std::to_string(u));
      }
      return std::log(u);
    case UnaryOp::Sqrt:
      if (u < 0.0) {
        throw EvaluationError("sqrt of negative value " + std::to_string(u));
      }
      return std::sqrt(u);
    case UnaryOp::Abs: return std::abs(u);
  }
  throw EvaluationError("unknown unary operation");
}

double eval_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::Add: return a + b;
    case BinaryOp::Sub: return a - b;
    case BinaryOp::Mul: return a * b;
    case BinaryOp::Div:
      if (b == 0.0) throw EvaluationError("division by zero");
      return a / b;
    case BinaryOp::Pow: {
      const double r = std::pow(a, b);
      if (!std::isfinite(r)) {
        throw EvaluationError("pow(" + std::to_string(a) + ", " +
                              std::to_string(b) + ") is not finite");
      }
      return r;
    }
  }
  throw EvaluationError("unknown binary operation");
}

double eval_node(const Node& n, const EvalContext& ctx) {
  switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable:
      switch (n.var) {
        case Var::X: return ctx.x;
        case Var::Y: return ctx.y;
        case Var::V: return ctx.v;
        case Var::W: return ctx.w;
      }
      break;
    case Kind::Coefficient:
      if (ctx.coeffs == nullptr || !*ctx.coeffs) {
        throw EvaluationError("coefficient '" + n.coeff + "' is not bound");
      }
      return (*ctx.coeffs)(n.coeff, ctx.x);
    case Kind::Unary: return eval_unary(n.uop, eval_node(*n.lhs, ctx));
    case Kind::Binary:
      return eval_binary(n.bop, eval_node(*n.lhs, ctx), eval_node(*n.rhs, ctx));
    case Kind::Ml: return mittag_leffler(n.ml_alpha, eval_node(*n.lhs, ctx));
  }
  throw EvaluationError("malformed expression node");
}

bool node_uses(const Node& n, Var v) {
  switch (n.kind) {
    case Kind::Constant: return false;
    case Kind::Variable: return n.var == v;
    case Kind::Coefficient: return false;
    case Kind::Unary:
    case Kind::Ml: return node_uses(*n.lhs, v);
    case Kind::Binary: return node_uses(*n.lhs, v) || node_uses(*n.rhs, v);
  }
  return false;
}

void node_coefficients(const Node& n, std::set<std::string>& out) {
  switch (n.kind) {
    case Kind::Coefficient: out.insert(n.coeff); return;
    case Kind::Unary:
    case Kind::Ml: node_coefficients(*n.lhs, out); return;
    case Kind::Binary:
      node_coefficients(*n.lhs, out);
      node_coefficients(*n.rhs, out);
      return;
    default: return;
  }
}

NodePtr diff_node(const NodePtr& n, Var wrt) {
  switch (n->kind) {
    case Kind::Constant:
    case Kind::Coefficient: return make_constant(0.0);
    case Kind::Variable:
      return make_constant(n->var == wrt ? 1.0 : 0.0);
    case Kind::Unary: {
      NodePtr du = diff_node(n->lhs, wrt);
      if (is_zero_node(du)) return du;
      switch (n->uop) {
        case UnaryOp::Neg: return make_unary(UnaryOp::Neg, std::move(du));
        case UnaryOp::Sin:
          return product(make_unary(UnaryOp::Cos, n->lhs), std::move(du));
        case UnaryOp::Cos:
          return make_unary(
              UnaryOp::Neg,
              product(make_unary(UnaryOp::Sin, n->lhs), std::move(du)));
        case UnaryOp::Exp:
          return product(make_unary(UnaryOp::Exp, n->lhs), std::move(du));
        case UnaryOp::Ln: return quotient(std::move(du), n->lhs);
        case UnaryOp::Sqrt:
          return quotient(std::move(du),
                          product(make_constant(2.0),
                                  make_unary(UnaryOp::Sqrt, n->lhs)));
        case UnaryOp::Abs:
          // u/|u| * du; evaluating at u = 0 divides by zero, which is the
          // documented behavior for abs at the kink.
          return product(quotient(n->lhs, make_unary(UnaryOp::Abs, n->lhs)),
                         std::move(du));
      }
      break;
    }
    case Kind::Binary: {
      switch (n->bop) {
        case BinaryOp::Add:
          return sum(diff_node(n->lhs, wrt), diff_node(n->rhs, wrt));
        case BinaryOp::Sub:
          return difference(diff_node(n->lhs, wrt), diff_node(n->rhs, wrt));
        case BinaryOp::Mul:
          return sum(product(diff_node(n->lhs, wrt), n->rhs),
                     product(n->lhs, diff_node(n->rhs, wrt)));
        case BinaryOp::Div:
          // da/b - a*db/b^2
          return difference(
              quotient(diff_node(n->lhs, wrt), n->rhs),
              quotient(product(n->lhs, diff_node(n->rhs, wrt)),
                       make_binary(BinaryOp::Mul, n->rhs, n->rhs)));
        case BinaryOp::Pow: {
          double c;
          if (is_const(n->rhs, &c)) {
            // c * u^(c-1) * du
            NodePtr du = diff_node(n->lhs, wrt);
            if (is_zero_node(du)) return du;
            NodePtr power;
            if (c == 1.0) {
              power = make_constant(1.0);
            } else if (c == 2.0) {
              power = n->lhs;
            } else {
              power = make_binary(BinaryOp::Pow, n->lhs, make_constant(c - 1.0));
            }
            return product(product(make_constant(c), std::move(power)),
                           std::move(du));
          }
          // u^w * (dw ln u + w du / u)
          NodePtr du = diff_node(n->lhs, wrt);
          NodePtr dw = diff_node(n->rhs, wrt);
          if (is_zero_node(du) && is_zero_node(dw)) return du;
          NodePtr term1 = product(std::move(dw), make_unary(UnaryOp::Ln, n->lhs));
          NodePtr term2 = quotient(product(n->rhs, std::move(du)), n->lhs);
          return product(make_binary(BinaryOp::Pow, n->lhs, n->rhs),
                         sum(std::move(term1), std::move(term2)));
        }
      }
      break;
    }
    case Kind::Ml: {
      NodePtr du = diff_node(n->lhs, wrt);
      if (is_zero_node(du)) return du;
      throw DifferentiationError(
          "derivative of ml(...) with respect to " +
          std::string(var_name(wrt)) +
          " is outside the expression node set");
    }
  }
  throw DifferentiationError("malformed expression node");
}

bool nodes_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Constant:
      // Bit-level comparison keeps -0.0 and 0.0 distinguishable.
      return a.value == b.value &&
             std::signbit(a.value) == std::signbit(b.value);
    case Kind::Variable: return a.var == b.var;
    case Kind::Coefficient: return a.coeff == b.coeff;
    case Kind::Unary: return a.uop == b.uop && nodes_equal(*a.lhs, *b.lhs);
    case Kind::Binary:
      return a.bop == b.bop && nodes_equal(*a.lhs, *b.lhs) &&
             nodes_equal(*a.rhs, *b.rhs);
    case Kind::Ml:
      return a.ml_alpha == b.ml_alpha && nodes_equal(*a.lhs, *b.lhs);
  }
  return false;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Printing precedence levels; parentheses are emitted whenever a child
// binds no tighter than its context requires.
int node_prec(const Node& n) {
  switch (n.kind) {
    case Kind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
      return 1;
    case Kind::Unary: return n.uop == UnaryOp::Neg ? 3 : 5;
    case Kind::Constant: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  if (node_prec(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Constant: out += format_double(n.value); return;
    case Kind::Variable: out += var_name(n.var); return;
    case Kind::Coefficient:
      out += "coeff:";
      out += n.coeff;
      return;
    case Kind::Unary:
      switch (n.uop) {
        case UnaryOp::Neg:
          out += '-';
          print_child(*n.lhs, 4, out);
          return;
        case UnaryOp::Sin: out += "sin("; break;
        case UnaryOp::Cos: out += "cos("; break;
        case UnaryOp::Exp: out += "exp("; break;
        case UnaryOp::Ln: out += "ln("; break;
        case UnaryOp::Sqrt: out += "sqrt("; break;
        case UnaryOp::Abs: out += "abs("; break;
      }
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Binary: {
      const char* op = nullptr;
      int lp = 0, rp = 0;
      // Right children at equal precedence keep their parentheses so the
      // left-associative reparse rebuilds the identical tree.
      switch (n.bop) {
        case BinaryOp::Add: op = " + "; lp = 1; rp = 2; break;
        case BinaryOp::Sub: op = " - "; lp = 1; rp = 2; break;
        case BinaryOp::Mul: op = " * "; lp = 2; rp = 3; break;
        case BinaryOp::Div: op = " / "; lp = 2; rp = 3; break;
        case BinaryOp::Pow: op = "^"; lp = 5; rp = 4; break;
      }
      print_child(*n.lhs, lp, out);
      out += op;
      print_child(*n.rhs, rp, out);
      return;
    }
    case Kind::Ml:
      out += "ml(";
      out += format_double(n.ml_alpha);
      out += ", ";
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

// --- Parser ---------------------------------------------------------------

struct Token {
  enum class Type {
    Number, Ident, Plus, Minus, Star, Slash, Caret,
    LParen, RParen, Comma, Colon, End
  };
  Type type;
  std::size_t offset;
  double number = 0.0;
  std::string text;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    if (pos_ >= src_.size()) return {Token::Type::End, src_.size()};
    const std::size_t at = pos_;
    const char c = src_[pos_];
    switch (c) {
      case '+': ++pos_; return {Token::Type::Plus, at};
      case '-': ++pos_; return {Token::Type::Minus, at};
      case '*': ++pos_; return {Token::Type::Star, at};
      case '/': ++pos_; return {Token::Type::Slash, at};
      case '^': ++pos_; return {Token::Type::Caret, at};
      case '(': ++pos_; return {Token::Type::LParen, at};
      case ')': ++pos_; return {Token::Type::RParen, at};
      case ',': ++pos_; return {Token::Type::Comma, at};
      case ':': ++pos_; return {Token::Type::Colon, at};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return lex_number(at);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) ||
              src_[end] == '_')) {
        ++end;
      }
      Token t{Token::Type::Ident, at};
      t.text = std::string(src_.substr(pos_, end - pos_));
      pos_ = end;
      return t;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", at);
  }

 private:
  Token lex_number(std::size_t at) {
    // strtod on a bounded copy; track how much it consumed.
    const std::size_t max_len = std::min<std::size_t>(64, src_.size() - pos_);
    const std::string chunk(src_.substr(pos_, max_len));
    char* end = nullptr;
    const double value = std::strtod(chunk.c_str(), &end);
    if (end == chunk.c_str()) {
      throw ParseError("malformed numeric literal", at);
    }
    if (!std::isfinite(value)) {
      throw ParseError("numeric literal out of range", at);
    }
    pos_ += static_cast<std::size_t>(end - chunk.c_str());
    Token t{Token::Type::Number, at};
    t.number = value;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  NodePtr run() {
    NodePtr root = parse_expression();
    if (current_.type != Token::Type::End) {
      throw ParseError("unexpected trailing input", current_.offset);
    }
    return root;
  }

 private:
  static constexpr int kMaxDepth = 400;

  void advance() { current_ = lexer_.next(); }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) {
        throw ParseError("expression nested too deeply",
                         parser.current_.offset);
      }
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  NodePtr parse_expression() {
    DepthGuard guard(*this);
    NodePtr lhs = parse_term();
    while (current_.type == Token::Type::Plus ||
           current_.type == Token::Type::Minus) {
      const bool add = current_.type == Token::Type::Plus;
      advance();
      NodePtr rhs = parse_term();
      lhs = make_binary(add ? BinaryOp::Add : BinaryOp::Sub, std::move(lhs),
                        std::move(rhs));
    }
    return lhs;
  }

  NodePtr parse_term() {
    DepthGuard guard(*this);
    NodePtr lhs = parse_factor();
    while (current_.type == Token::Type::Star ||
           current_.type == Token::Type::Slash) {
      const bool mul = current_.type == Token::Type::Star;
      advance();
      NodePtr rhs = parse_factor();
      lhs = make_binary(mul ? BinaryOp::Mul : BinaryOp::Div, std::move(lhs),
                        std::move(rhs));
    }
    return lhs;
  }

  NodePtr parse_factor() {
    DepthGuard guard(*this);
    if (current_.type == Token::Type::Minus) {
      advance();
      return make_unary(UnaryOp::Neg, parse_factor());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    DepthGuard guard(*this);
    NodePtr base = parse_atom();
    if (current_.type == Token::Type::Caret) {
      advance();
      // Right associative; the exponent may carry its own unary minus.
      NodePtr exponent = parse_factor();
      return make_binary(BinaryOp::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  NodePtr parse_atom() {
    DepthGuard guard(*this);
    switch (current_.type) {
      case Token::Type::Number: {
        const double v = current_.number;
        advance();
        return make_constant(v);
      }
      case Token::Type::LParen: {
        advance();
        NodePtr inner = parse_expression();
        expect(Token::Type::RParen, "expected ')'");
        return inner;
      }
      case Token::Type::Ident: return parse_ident();
      default:
        throw ParseError("expected expression", current_.offset);
    }
  }

  NodePtr parse_ident() {
    const Token ident = current_;
    advance();
    const std::string& name = ident.text;
    if (name == "x") return make_variable(Var::X);
    if (name == "y") return make_variable(Var::Y);
    if (name == "v") return make_variable(Var::V);
    if (name == "w") return make_variable(Var::W);
    if (name == "coeff") {
      expect(Token::Type::Colon, "expected ':' after coeff");
      if (current_.type != Token::Type::Ident) {
        throw ParseError("expected coefficient name", current_.offset);
      }
      std::string coeff = current_.text;
      advance();
      return make_coefficient(std::move(coeff));
    }
    if (name == "ml") {
      expect(Token::Type::LParen, "expected '(' after ml");
      const std::size_t order_at = current_.offset;
      NodePtr order = parse_expression();
      double alpha;
      if (!is_const(order, &alpha)) {
        throw ParseError("Mittag-Leffler order must be a constant", order_at);
      }
      if (!(alpha > 0.0)) {
        throw ParseError("Mittag-Leffler order must be positive", order_at);
      }
      expect(Token::Type::Comma, "expected ',' in ml(order, argument)");
      NodePtr arg = parse_expression();
      expect(Token::Type::RParen, "expected ')'");
      return make_ml(alpha, std::move(arg));
    }
    UnaryOp op;
    if (name == "sin") op = UnaryOp::Sin;
    else if (name == "cos") op = UnaryOp::Cos;
    else if (name == "exp") op = UnaryOp::Exp;
    else if (name == "ln") op = UnaryOp::Ln;
    else if (name == "sqrt") op = UnaryOp::Sqrt;
    else if (name == "abs") op = UnaryOp::Abs;
    else {
      throw ParseError("unknown identifier '" + name + "'", ident.offset);
    }
    expect(Token::Type::LParen, "expected '(' after function name");
    NodePtr arg = parse_expression();
    expect(Token::Type::RParen, "expected ')'");
    return make_unary(op, std::move(arg));
  }

  void expect(Token::Type type, const char* message) {
    if (current_.type != type) throw ParseError(message, current_.offset);
    advance();
  }

  Lexer lexer_;
  Token current_{Token::Type::End, 0};
  int depth_ = 0;
};

}  // namespace
}  // namespace detail

// --- Expression public surface ---------------------------------------------

Expression Expression::parse(std::string_view src) {
  if (src.empty()) throw ParseError("empty expression", 0);
  if (src.size() > 64 * 1024) {
    throw ParseError("expression source exceeds 64 KiB", 64 * 1024);
  }
  detail::Parser parser(src);
  return Expression(parser.run());
}

Expression Expression::constant(double value) {
  return Expression(detail::make_constant(value));
}

Expression Expression::variable(Var v) {
  return Expression(detail::make_variable(v));
}

Expression Expression::coefficient(std::string name) {
  return Expression(detail::make_coefficient(std::move(name)));
}

Expression Expression::operator+(const Expression& rhs) const {
  return Expression(detail::make_binary(detail::BinaryOp::Add, node_, rhs.node_));
}
Expression Expression::operator-(const Expression& rhs) const {
  return Expression(detail::make_binary(detail::BinaryOp::Sub, node_, rhs.node_));
}
Expression Expression::operator*(const Expression& rhs) const {
  return Expression(detail::make_binary(detail::BinaryOp::Mul, node_, rhs.node_));
}
Expression Expression::operator/(const Expression& rhs) const {
  return Expression(detail::make_binary(detail::BinaryOp::Div, node_, rhs.node_));
}

Expression Expression::scaled(double c) const {
  if (c == 0.0) return constant(0.0);
  if (c == 1.0) return *this;
  return Expression(
      detail::product(detail::make_constant(c), node_));
}

Expression Expression::plus(const Expression& rhs) const {
  return Expression(detail::sum(node_, rhs.node_));
}

double Expression::eval(const EvalContext& ctx) const {
  return detail::eval_node(*node_, ctx);
}

Expression Expression::differentiate(Var wrt) const {
  if (wrt == Var::X) {
    throw ArgumentError("partial derivatives are taken in y, v, or w only");
  }
  return Expression(detail::diff_node(node_, wrt));
}

std::string Expression::to_string() const {
  std::string out;
  detail::print_node(*node_, out);
  return out;
}

bool Expression::structurally_equal(const Expression& other) const {
  return detail::nodes_equal(*node_, *other.node_);
}

bool Expression::is_constant() const {
  return node_->kind == detail::Kind::Constant;
}

bool Expression::is_zero() const {
  return is_constant() && node_->value == 0.0;
}

double Expression::constant_value() const {
  if (!is_constant()) throw ArgumentError("expression is not a constant");
  return node_->value;
}

bool Expression::uses_variable(Var v) const {
  return detail::node_uses(*node_, v);
}

std::set<std::string> Expression::coefficient_names() const {
  std::set<std::string> out;
  detail::node_coefficients(*node_, out);
  return out;
}

}  // namespace fracvar
