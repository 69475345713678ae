#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bergerkit {

// Immutable expression tree over indexed variables x_0, x_1, ... with
// floating-point constants. Constructors fold constants and drop neutral terms.
class Expr {
 public:
  enum class Kind { constant, variable, add, mul, pow, sin, cos, exp, log };

  Expr(double c = 0.0);  // NOLINT: implicit constants keep formulas readable
  static Expr var(std::size_t i);

  Kind kind() const;
  bool is_constant() const { return kind() == Kind::constant; }
  bool is_zero() const;
  double constant_value() const;  // only for constants
  std::size_t variable_index() const;
  // One past the largest variable index that occurs, 0 for constants.
  std::size_t arity() const;

  double eval(std::span<const double> x) const;
  Expr derivative(std::size_t i) const;
  // Replaces x_i by vars[i].
  Expr substitute(const std::vector<Expr>& vars) const;
  // Renumbers x_i to x_{map[i]}.
  Expr remap(const std::vector<std::size_t>& map) const;
  std::string to_string(const std::vector<std::string>& names) const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Grammar: + - * / ^ (right associative), unary minus, parentheses, numbers,
// pi, variables from `names`, and sin cos tan exp log sqrt. Throws
// PreconditionError with the offending position.
Expr parse_expr(const std::string& text, const std::vector<std::string>& names);

}  // namespace bergerkit
