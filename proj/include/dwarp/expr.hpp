// dwarp - scalar expression trees: parsing, evaluation, exact differentiation

#ifndef DWARP_EXPR_HPP_
#define DWARP_EXPR_HPP_

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>

namespace dwarp {

// Thrown by eval() for unbound variables and runtime domain violations
// (log of a non-positive value, division by zero, fractional power of a
// negative base). Construction of expressions never throws these.
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by parse(); carries the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

using Env = std::map<std::string, double>;

// Immutable expression tree over named coordinates. Copies share nodes.
// Supported nodes: constants, variables, + - * /, rational powers, unary
// negation, sin, cos, exp, ln, sqrt.
class ScalarExpr {
 public:
  enum class Kind {
    kConst, kVar, kAdd, kSub, kMul, kDiv, kPow, kNeg,
    kSin, kCos, kExp, kLn, kSqrt,
  };

  ScalarExpr() : ScalarExpr(constant(0.0)) {}

  static ScalarExpr constant(double value);
  static ScalarExpr variable(const std::string& name);

  Kind kind() const { return node_->kind; }
  double constant_value() const { return node_->value; }
  const std::string& var_name() const { return node_->name; }
  // Rational exponent p/q of a kPow node.
  long long pow_num() const { return node_->pnum; }
  long long pow_den() const { return node_->pden; }
  ScalarExpr child_a() const { return ScalarExpr(node_->a); }
  ScalarExpr child_b() const { return ScalarExpr(node_->b); }

  bool is_constant(double value) const {
    return node_->kind == Kind::kConst && node_->value == value;
  }

 private:
  struct Node {
    Kind kind;
    double value = 0.0;       // kConst
    std::string name;         // kVar
    long long pnum = 1, pden = 1;  // kPow exponent
    std::shared_ptr<const Node> a, b;  // children (b unused for unary nodes)
    Node(Kind k, std::shared_ptr<const Node> lhs, std::shared_ptr<const Node> rhs)
        : kind(k), a(std::move(lhs)), b(std::move(rhs)) {}
    explicit Node(double v) : kind(Kind::kConst), value(v) {}
    explicit Node(std::string n) : kind(Kind::kVar), name(std::move(n)) {}
  };

  explicit ScalarExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;

  friend ScalarExpr make_binary(Kind kind, const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr make_unary(Kind kind, const ScalarExpr& a);
  friend ScalarExpr pow(const ScalarExpr& base, long long num, long long den);
};

ScalarExpr make_binary(ScalarExpr::Kind kind, const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr make_unary(ScalarExpr::Kind kind, const ScalarExpr& a);

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b);
ScalarExpr operator-(const ScalarExpr& a);

ScalarExpr pow(const ScalarExpr& base, long long num, long long den = 1);
ScalarExpr sin(const ScalarExpr& e);
ScalarExpr cos(const ScalarExpr& e);
ScalarExpr exp(const ScalarExpr& e);
ScalarExpr ln(const ScalarExpr& e);
ScalarExpr sqrt(const ScalarExpr& e);

// Grammar: infix + - * /, '^' with integer or parenthesised rational
// exponents, calls sin/cos/exp/ln/sqrt, parentheses, identifiers as
// coordinates. See README for the EBNF.
ScalarExpr parse(const std::string& text);

double eval(const ScalarExpr& e, const Env& env);

// Exact symbolic derivative; only constant folding of literal 0/1 is applied.
ScalarExpr diff(const ScalarExpr& e, const std::string& var);

// Infix rendering; parse(render(e)) is structurally equal to e.
std::string render(const ScalarExpr& e);

// Replaces variables listed in `bindings` by constants.
ScalarExpr substitute(const ScalarExpr& e, const Env& bindings);

void collect_variables(const ScalarExpr& e, std::set<std::string>& out);
std::set<std::string> free_variables(const ScalarExpr& e);

// Structural equality (same tree shape, same constants and names).
bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b);

}  // namespace dwarp

#endif  // DWARP_EXPR_HPP_
