// dwarp - scalar expression trees: parsing, evaluation, exact differentiation

#include "dwarp/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace dwarp {

using Kind = ScalarExpr::Kind;

ScalarExpr ScalarExpr::constant(double value) {
  return ScalarExpr(std::make_shared<const Node>(value));
}

ScalarExpr ScalarExpr::variable(const std::string& name) {
  return ScalarExpr(std::make_shared<const Node>(name));
}

namespace {

bool is_const(const ScalarExpr& e) { return e.kind() == Kind::kConst; }

}  // namespace

// Smart constructors fold literal constants and drop 0/1 identities so that
// derivatives stay readable. No other simplification is attempted;
// correctness is defined by eval().
ScalarExpr make_binary(Kind kind, const ScalarExpr& a, const ScalarExpr& b) {
  if (is_const(a) && is_const(b)) {
    double x = a.constant_value(), y = b.constant_value();
    switch (kind) {
      case Kind::kAdd: return ScalarExpr::constant(x + y);
      case Kind::kSub: return ScalarExpr::constant(x - y);
      case Kind::kMul: return ScalarExpr::constant(x * y);
      case Kind::kDiv:
        if (y != 0.0) return ScalarExpr::constant(x / y);
        break;  // keep the node; error surfaces at eval time
      default: break;
    }
  }
  switch (kind) {
    case Kind::kAdd:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      break;
    case Kind::kSub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return make_unary(Kind::kNeg, b);
      break;
    case Kind::kMul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return ScalarExpr::constant(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      break;
    case Kind::kDiv:
      if (a.is_constant(0.0)) return ScalarExpr::constant(0.0);
      if (b.is_constant(1.0)) return a;
      break;
    default:
      break;
  }
  return ScalarExpr(std::make_shared<const ScalarExpr::Node>(kind, a.node_, b.node_));
}

ScalarExpr make_unary(Kind kind, const ScalarExpr& a) {
  if (kind == Kind::kNeg && is_const(a)) return ScalarExpr::constant(-a.constant_value());
  if (kind == Kind::kNeg && a.kind() == Kind::kNeg) return a.child_a();
  return ScalarExpr(std::make_shared<const ScalarExpr::Node>(kind, a.node_, nullptr));
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) { return make_binary(Kind::kAdd, a, b); }
ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return make_binary(Kind::kSub, a, b); }
ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) { return make_binary(Kind::kMul, a, b); }
ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) { return make_binary(Kind::kDiv, a, b); }
ScalarExpr operator-(const ScalarExpr& a) { return make_unary(Kind::kNeg, a); }

ScalarExpr pow(const ScalarExpr& base, long long num, long long den) {
  if (den == 0) throw std::invalid_argument("pow: zero exponent denominator");
  if (den < 0) { num = -num; den = -den; }
  if (num == 0) return ScalarExpr::constant(1.0);
  if (num == den) return base;
  auto node = std::make_shared<ScalarExpr::Node>(Kind::kPow, base.node_, nullptr);
  node->pnum = num;
  node->pden = den;
  return ScalarExpr(std::shared_ptr<const ScalarExpr::Node>(std::move(node)));
}

ScalarExpr sin(const ScalarExpr& e) { return make_unary(Kind::kSin, e); }
ScalarExpr cos(const ScalarExpr& e) { return make_unary(Kind::kCos, e); }
ScalarExpr exp(const ScalarExpr& e) { return make_unary(Kind::kExp, e); }
ScalarExpr ln(const ScalarExpr& e) { return make_unary(Kind::kLn, e); }
ScalarExpr sqrt(const ScalarExpr& e) { return make_unary(Kind::kSqrt, e); }

//----------------------------------------------------------------------------
// Evaluation

double eval(const ScalarExpr& e, const Env& env) {
  switch (e.kind()) {
    case Kind::kConst:
      return e.constant_value();
    case Kind::kVar: {
      auto it = env.find(e.var_name());
      if (it == env.end()) throw EvalError("unbound variable '" + e.var_name() + "'");
      return it->second;
    }
    case Kind::kAdd: return eval(e.child_a(), env) + eval(e.child_b(), env);
    case Kind::kSub: return eval(e.child_a(), env) - eval(e.child_b(), env);
    case Kind::kMul: return eval(e.child_a(), env) * eval(e.child_b(), env);
    case Kind::kDiv: {
      double num = eval(e.child_a(), env), den = eval(e.child_b(), env);
      if (den == 0.0) throw EvalError("division by zero");
      return num / den;
    }
    case Kind::kPow: {
      double base = eval(e.child_a(), env);
      long long p = e.pow_num(), q = e.pow_den();
      if (base == 0.0 && p < 0) throw EvalError("zero raised to a negative power");
      if (q == 1) return std::pow(base, static_cast<double>(p));
      if (base < 0.0) throw EvalError("fractional power of a negative base");
      return std::pow(base, static_cast<double>(p) / static_cast<double>(q));
    }
    case Kind::kNeg: return -eval(e.child_a(), env);
    case Kind::kSin: return std::sin(eval(e.child_a(), env));
    case Kind::kCos: return std::cos(eval(e.child_a(), env));
    case Kind::kExp: return std::exp(eval(e.child_a(), env));
    case Kind::kLn: {
      double x = eval(e.child_a(), env);
      if (x <= 0.0) throw EvalError("log of a non-positive value");
      return std::log(x);
    }
    case Kind::kSqrt: {
      double x = eval(e.child_a(), env);
      if (x < 0.0) throw EvalError("sqrt of a negative value");
      return std::sqrt(x);
    }
  }
  throw EvalError("corrupt expression node");
}

//----------------------------------------------------------------------------
// Differentiation

ScalarExpr diff(const ScalarExpr& e, const std::string& var) {
  switch (e.kind()) {
    case Kind::kConst:
      return ScalarExpr::constant(0.0);
    case Kind::kVar:
      return ScalarExpr::constant(e.var_name() == var ? 1.0 : 0.0);
    case Kind::kAdd:
      return diff(e.child_a(), var) + diff(e.child_b(), var);
    case Kind::kSub:
      return diff(e.child_a(), var) - diff(e.child_b(), var);
    case Kind::kMul:
      return diff(e.child_a(), var) * e.child_b() + e.child_a() * diff(e.child_b(), var);
    case Kind::kDiv:
      return (diff(e.child_a(), var) * e.child_b() -
              e.child_a() * diff(e.child_b(), var)) /
             (e.child_b() * e.child_b());
    case Kind::kPow: {
      // d(u^{p/q}) = (p/q) u^{(p-q)/q} du ; the exponent stays rational.
      long long p = e.pow_num(), q = e.pow_den();
      ScalarExpr coeff = ScalarExpr::constant(static_cast<double>(p) / static_cast<double>(q));
      return coeff * pow(e.child_a(), p - q, q) * diff(e.child_a(), var);
    }
    case Kind::kNeg:
      return -diff(e.child_a(), var);
    case Kind::kSin:
      return cos(e.child_a()) * diff(e.child_a(), var);
    case Kind::kCos:
      return -(sin(e.child_a()) * diff(e.child_a(), var));
    case Kind::kExp:
      return exp(e.child_a()) * diff(e.child_a(), var);
    case Kind::kLn:
      return diff(e.child_a(), var) / e.child_a();
    case Kind::kSqrt:
      return diff(e.child_a(), var) / (ScalarExpr::constant(2.0) * sqrt(e.child_a()));
  }
  throw std::logic_error("corrupt expression node");
}

//----------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ScalarExpr parse_all() {
    ScalarExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  ScalarExpr parse_expr() {
    ScalarExpr e = parse_term();
    for (;;) {
      skip_ws();
      if (accept('+')) e = e + parse_term();
      else if (accept('-')) e = e - parse_term();
      else return e;
    }
  }

  ScalarExpr parse_term() {
    ScalarExpr e = parse_unary();
    for (;;) {
      skip_ws();
      if (accept('*')) e = e * parse_unary();
      else if (accept('/')) e = e / parse_unary();
      else return e;
    }
  }

  ScalarExpr parse_unary() {
    skip_ws();
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  ScalarExpr parse_power() {
    ScalarExpr base = parse_atom();
    skip_ws();
    if (!accept('^')) return base;
    auto [num, den] = parse_rational_exponent();
    return pow(base, num, den);
  }

  std::pair<long long, long long> parse_rational_exponent() {
    skip_ws();
    if (accept('(')) {
      long long num = parse_integer();
      long long den = 1;
      skip_ws();
      if (accept('/')) den = parse_integer();
      skip_ws();
      expect(')');
      if (den == 0) throw ParseError("zero exponent denominator", pos_);
      return {num, den};
    }
    return {parse_integer(), 1};
  }

  long long parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = accept('-');
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError("expected integer exponent", start);
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      v = 10 * v + (text_[pos_++] - '0');
    return neg ? -v : v;
  }

  ScalarExpr parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (accept('(')) {
      ScalarExpr e = parse_expr();
      skip_ws();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ScalarExpr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return ScalarExpr::constant(v);
  }

  ScalarExpr parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      ScalarExpr arg = parse_expr();
      skip_ws();
      expect(')');
      if (name == "sin") return sin(arg);
      if (name == "cos") return cos(arg);
      if (name == "exp") return exp(arg);
      if (name == "ln" || name == "log") return ln(arg);
      if (name == "sqrt") return sqrt(arg);
      throw ParseError("unknown function '" + name + "'", start);
    }
    return ScalarExpr::variable(name);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) { ++pos_; return true; }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarExpr parse(const std::string& text) { return Parser(text).parse_all(); }

//----------------------------------------------------------------------------
// Rendering

namespace {

// Precedence levels: additive 1, multiplicative 2, unary 3, power 4, atom 5.
int precedence(Kind k) {
  switch (k) {
    case Kind::kAdd: case Kind::kSub: return 1;
    case Kind::kMul: case Kind::kDiv: return 2;
    case Kind::kNeg: return 3;
    case Kind::kPow: return 4;
    default: return 5;
  }
}

void render_to(const ScalarExpr& e, std::ostream& os, int parent_prec, bool rhs) {
  int prec = precedence(e.kind());
  bool need_parens = prec < parent_prec ||
                     (prec == parent_prec && rhs && prec <= 2);
  if (need_parens) os << '(';
  switch (e.kind()) {
    case Kind::kConst: {
      std::ostringstream tmp;
      tmp.precision(17);
      tmp << e.constant_value();
      std::string s = tmp.str();
      if (!s.empty() && s[0] == '-') { os << '(' << s << ')'; }
      else os << s;
      break;
    }
    case Kind::kVar: os << e.var_name(); break;
    case Kind::kAdd:
      render_to(e.child_a(), os, 1, false); os << " + "; render_to(e.child_b(), os, 1, true);
      break;
    case Kind::kSub:
      render_to(e.child_a(), os, 1, false); os << " - "; render_to(e.child_b(), os, 1, true);
      break;
    case Kind::kMul:
      render_to(e.child_a(), os, 2, false); os << "*"; render_to(e.child_b(), os, 2, true);
      break;
    case Kind::kDiv:
      render_to(e.child_a(), os, 2, false); os << "/"; render_to(e.child_b(), os, 2, true);
      break;
    case Kind::kPow:
      render_to(e.child_a(), os, 5, false);
      if (e.pow_den() == 1 && e.pow_num() >= 0) os << "^" << e.pow_num();
      else os << "^(" << e.pow_num() << "/" << e.pow_den() << ")";
      break;
    case Kind::kNeg:
      os << "-"; render_to(e.child_a(), os, 3, true);
      break;
    case Kind::kSin: os << "sin("; render_to(e.child_a(), os, 0, false); os << ')'; break;
    case Kind::kCos: os << "cos("; render_to(e.child_a(), os, 0, false); os << ')'; break;
    case Kind::kExp: os << "exp("; render_to(e.child_a(), os, 0, false); os << ')'; break;
    case Kind::kLn: os << "ln("; render_to(e.child_a(), os, 0, false); os << ')'; break;
    case Kind::kSqrt: os << "sqrt("; render_to(e.child_a(), os, 0, false); os << ')'; break;
  }
  if (need_parens) os << ')';
}

}  // namespace

std::string render(const ScalarExpr& e) {
  std::ostringstream os;
  render_to(e, os, 0, false);
  return os.str();
}

//----------------------------------------------------------------------------
// Utilities

ScalarExpr substitute(const ScalarExpr& e, const Env& bindings) {
  switch (e.kind()) {
    case Kind::kConst: return e;
    case Kind::kVar: {
      auto it = bindings.find(e.var_name());
      return it == bindings.end() ? e : ScalarExpr::constant(it->second);
    }
    case Kind::kPow:
      return pow(substitute(e.child_a(), bindings), e.pow_num(), e.pow_den());
    case Kind::kAdd: case Kind::kSub: case Kind::kMul: case Kind::kDiv:
      return make_binary(e.kind(), substitute(e.child_a(), bindings),
                         substitute(e.child_b(), bindings));
    default:
      return make_unary(e.kind(), substitute(e.child_a(), bindings));
  }
}

void collect_variables(const ScalarExpr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Kind::kConst: return;
    case Kind::kVar: out.insert(e.var_name()); return;
    case Kind::kAdd: case Kind::kSub: case Kind::kMul: case Kind::kDiv:
      collect_variables(e.child_a(), out);
      collect_variables(e.child_b(), out);
      return;
    default:
      collect_variables(e.child_a(), out);
      return;
  }
}

std::set<std::string> free_variables(const ScalarExpr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

bool structurally_equal(const ScalarExpr& a, const ScalarExpr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Kind::kConst: return a.constant_value() == b.constant_value();
    case Kind::kVar: return a.var_name() == b.var_name();
    case Kind::kPow:
      return a.pow_num() == b.pow_num() && a.pow_den() == b.pow_den() &&
             structurally_equal(a.child_a(), b.child_a());
    case Kind::kAdd: case Kind::kSub: case Kind::kMul: case Kind::kDiv:
      return structurally_equal(a.child_a(), b.child_a()) &&
             structurally_equal(a.child_b(), b.child_b());
    default:
      return structurally_equal(a.child_a(), b.child_a());
  }
}

}  // namespace dwarp
