#include "bergerkit/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include "bergerkit/errors.hpp"

namespace bergerkit {

struct Expr::Node {
  Kind kind;
  double value = 0.0;
  std::size_t index = 0;
  std::vector<Expr> args;
};

Expr::Expr(double c) : node_(std::make_shared<Node>(Node{Kind::constant, c, 0, {}})) {}

Expr Expr::var(std::size_t i) { return Expr(std::make_shared<Node>(Node{Kind::variable, 0.0, i, {}})); }

Expr::Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return is_constant() && node_->value == 0.0; }
double Expr::constant_value() const { return node_->value; }
std::size_t Expr::variable_index() const { return node_->index; }

std::size_t Expr::arity() const {
  if (kind() == Kind::variable) return node_->index + 1;
  std::size_t a = 0;
  for (auto& c : node_->args) a = std::max(a, c.arity());
  return a;
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() + b.constant_value();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::add, 0.0, 0, {a, b}}));
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return a.constant_value() * b.constant_value();
  if (a.is_zero() || b.is_zero()) return 0.0;
  if (a.is_constant() && a.constant_value() == 1.0) return b;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  if (b.is_constant()) return b * a;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::mul, 0.0, 0, {a, b}}));
}

Expr operator-(const Expr& a) { return Expr(-1.0) * a; }
Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }
Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw PreconditionError("expression: division by zero");
  if (b.is_constant()) return a * Expr(1.0 / b.constant_value());
  return a * pow(b, -1.0);
}

Expr pow(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return std::pow(a.constant_value(), b.constant_value());
  if (b.is_zero()) return 1.0;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  if (a.is_zero()) return 0.0;
  return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::pow, 0.0, 0, {a, b}}));
}

#define BERGERKIT_UNARY(name, KIND)                                                              \
  Expr name(const Expr& a) {                                                                     \
    if (a.is_constant()) return std::name(a.constant_value());                                   \
    return Expr(std::make_shared<Expr::Node>(Expr::Node{Expr::Kind::KIND, 0.0, 0, {a}}));        \
  }
BERGERKIT_UNARY(sin, sin)
BERGERKIT_UNARY(cos, cos)
BERGERKIT_UNARY(exp, exp)
BERGERKIT_UNARY(log, log)
#undef BERGERKIT_UNARY

double Expr::eval(std::span<const double> x) const {
  const auto& n = *node_;
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::variable:
      if (n.index >= x.size()) throw DimensionError("expression: variable index out of range");
      return x[n.index];
    case Kind::add:
      return n.args[0].eval(x) + n.args[1].eval(x);
    case Kind::mul:
      return n.args[0].eval(x) * n.args[1].eval(x);
    case Kind::pow:
      return std::pow(n.args[0].eval(x), n.args[1].eval(x));
    case Kind::sin:
      return std::sin(n.args[0].eval(x));
    case Kind::cos:
      return std::cos(n.args[0].eval(x));
    case Kind::exp:
      return std::exp(n.args[0].eval(x));
    case Kind::log:
      return std::log(n.args[0].eval(x));
  }
  return 0.0;
}

Expr Expr::derivative(std::size_t i) const {
  const auto& n = *node_;
  switch (n.kind) {
    case Kind::constant:
      return 0.0;
    case Kind::variable:
      return n.index == i ? 1.0 : 0.0;
    case Kind::add:
      return n.args[0].derivative(i) + n.args[1].derivative(i);
    case Kind::mul:
      return n.args[0].derivative(i) * n.args[1] + n.args[0] * n.args[1].derivative(i);
    case Kind::pow: {
      const auto &a = n.args[0], &b = n.args[1];
      if (b.is_constant()) return b * pow(a, b.constant_value() - 1.0) * a.derivative(i);
      return *this * (b.derivative(i) * log(a) + b * a.derivative(i) / a);
    }
    case Kind::sin:
      return cos(n.args[0]) * n.args[0].derivative(i);
    case Kind::cos:
      return -sin(n.args[0]) * n.args[0].derivative(i);
    case Kind::exp:
      return *this * n.args[0].derivative(i);
    case Kind::log:
      return n.args[0].derivative(i) / n.args[0];
  }
  return 0.0;
}

namespace {

Expr rebuild(Expr::Kind k, const std::vector<Expr>& a) {
  switch (k) {
    case Expr::Kind::add:
      return a[0] + a[1];
    case Expr::Kind::mul:
      return a[0] * a[1];
    case Expr::Kind::pow:
      return pow(a[0], a[1]);
    case Expr::Kind::sin:
      return sin(a[0]);
    case Expr::Kind::cos:
      return cos(a[0]);
    case Expr::Kind::exp:
      return exp(a[0]);
    case Expr::Kind::log:
      return log(a[0]);
    default:
      return a[0];
  }
}

}  // namespace

Expr Expr::substitute(const std::vector<Expr>& vars) const {
  const auto& n = *node_;
  if (n.kind == Kind::constant) return *this;
  if (n.kind == Kind::variable) {
    if (n.index >= vars.size()) throw DimensionError("expression: substitution misses a variable");
    return vars[n.index];
  }
  std::vector<Expr> a;
  for (auto& c : n.args) a.push_back(c.substitute(vars));
  return rebuild(n.kind, a);
}

Expr Expr::remap(const std::vector<std::size_t>& map) const {
  std::vector<Expr> vars;
  for (auto j : map) vars.push_back(var(j));
  return substitute(vars);
}

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::add:
      return 1;
    case Expr::Kind::mul:
      return 2;
    case Expr::Kind::pow:
      return 3;
    default:
      return 4;
  }
}

}  // namespace

std::string Expr::to_string(const std::vector<std::string>& names) const {
  const auto& n = *node_;
  auto wrap = [&](const Expr& c, int min_prec) {
    auto s = c.to_string(names);
    bool negative_const = c.is_constant() && c.constant_value() < 0;
    return (precedence(c.kind()) < min_prec || negative_const) ? "(" + s + ")" : s;
  };
  switch (n.kind) {
    case Kind::constant:
      return number(n.value);
    case Kind::variable:
      return n.index < names.size() ? names[n.index] : "x" + std::to_string(n.index);
    case Kind::add:
      return wrap(n.args[0], 1) + " + " + wrap(n.args[1], 1);
    case Kind::mul:
      return wrap(n.args[0], 2) + "*" + wrap(n.args[1], 3);
    case Kind::pow:
      return wrap(n.args[0], 4) + "^" + wrap(n.args[1], 4);
    case Kind::sin:
      return "sin(" + n.args[0].to_string(names) + ")";
    case Kind::cos:
      return "cos(" + n.args[0].to_string(names) + ")";
    case Kind::exp:
      return "exp(" + n.args[0].to_string(names) + ")";
    case Kind::log:
      return "log(" + n.args[0].to_string(names) + ")";
  }
  return "";
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& names) : s_(s), names_(names) {}

  Expr parse() {
    auto e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw PreconditionError("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) return ++pos_, true;
    return false;
  }

  Expr sum() {
    auto e = product();
    for (;;) {
      if (accept('+'))
        e = e + product();
      else if (accept('-'))
        e = e - product();
      else
        return e;
    }
  }
  Expr product() {
    auto e = signed_power();
    for (;;) {
      if (accept('*'))
        e = e * signed_power();
      else if (accept('/'))
        e = e / signed_power();
      else
        return e;
    }
  }
  Expr signed_power() {
    if (accept('-')) return -signed_power();
    if (accept('+')) return signed_power();
    return power();
  }
  Expr power() {
    auto base = primary();
    if (accept('^')) return pow(base, signed_power());
    return base;
  }
  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (accept('(')) {
      auto e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(s_.c_str() + pos_, &end);
      if (end == s_.c_str() + pos_) fail("bad number");
      pos_ = static_cast<std::size_t>(end - s_.c_str());
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(') return function(id);
      for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == id) return Expr::var(i);
      if (id == "pi") return std::numbers::pi;
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected character");
  }
  Expr function(const std::string& id) {
    accept('(');
    auto a = sum();
    if (!accept(')')) fail("expected ')'");
    if (id == "sin") return sin(a);
    if (id == "cos") return cos(a);
    if (id == "tan") return sin(a) / cos(a);
    if (id == "exp") return exp(a);
    if (id == "log") return log(a);
    if (id == "sqrt") return pow(a, 0.5);
    fail("unknown function '" + id + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text, const std::vector<std::string>& names) { return Parser(text, names).parse(); }

}  // namespace bergerkit
