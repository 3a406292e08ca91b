#pragma once

#include <limits>
#include <memory>
#include <string>
#include <string_view>

#include "cdgkit/catalog/jet.hpp"

namespace cdg::cat {

enum class Fn { sin, cos, tan, cot, sec, csc, sinh, cosh, tanh, coth, sech, csch, sqrt, exp };

const char* fn_name(Fn f);

/// Expression tree over the single variable xi and the constants r, lambda.
struct FormulaNode {
  enum class Op { constant, xi, r, lambda, add, sub, mul, div, neg, pow, call };
  Op op = Op::constant;
  /// Constant value, or the exponent of pow, as num/den (den > 0).
  long num = 0;
  long den = 1;
  Fn fn = Fn::sin;
  std::shared_ptr<const FormulaNode> a;
  std::shared_ptr<const FormulaNode> b;
};

/// Smallest |denominator| met during an evaluation, and the smallest
/// first-order estimate |D| / |dD/dxi| of the distance to a zero of a
/// xi-dependent denominator.
struct PoleScan {
  double min_denominator = std::numeric_limits<double>::infinity();
  double min_distance = std::numeric_limits<double>::infinity();

  bool regular(double margin, double denominator_floor = 1e-6) const {
    return min_denominator > denominator_floor && min_distance > margin;
  }
};

class Formula {
 public:
  Formula();  // the constant 0

  /// Grammar: + - * / ^, unary minus, integer literals, xi, r, lambda,
  /// sin cos tan cot sec csc sinh cosh tanh coth sech csch sqrt exp. Exponents
  /// are integer or (p/q) rational literals. Throws ParseError.
  static Formula parse(std::string_view text);
  static Formula constant(long num, long den = 1);

  /// Canonical text; parse(to_string()) renders identically.
  std::string to_string() const;
  std::string to_latex() const;
  bool depends_on_xi() const;
  bool is_zero() const;

  template <class T>
  T evaluate(const T& xi, double r, double lambda) const;

  /// Dual-number pass over every division and reciprocal function.
  PoleScan pole_scan(double xi, double r, double lambda) const;

  friend Formula operator+(const Formula& a, const Formula& b);
  friend Formula operator-(const Formula& a, const Formula& b);
  friend Formula operator*(const Formula& a, const Formula& b);
  friend Formula operator/(const Formula& a, const Formula& b);
  Formula operator-() const;

  const FormulaNode& root() const { return *root_; }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> root) : root_(std::move(root)) {}
  std::shared_ptr<const FormulaNode> root_;
};

namespace detail {

struct NoObserver {
  template <class T>
  void operator()(const T&) const {}
};

template <class T>
T from_ratio(long num, long den) {
  return T(static_cast<double>(num)) / T(static_cast<double>(den));
}

template <class T, class Observer>
T eval_node(const FormulaNode& n, const T& xi, const T& r, const T& lambda, Observer& obs) {
  using std::cos, std::cosh, std::exp, std::sin, std::sinh;
  using Op = FormulaNode::Op;
  auto recip = [&](const T& d) {
    obs(d);
    return T(1) / d;
  };
  switch (n.op) {
    case Op::constant: return from_ratio<T>(n.num, n.den);
    case Op::xi: return xi;
    case Op::r: return r;
    case Op::lambda: return lambda;
    case Op::add: return eval_node(*n.a, xi, r, lambda, obs) + eval_node(*n.b, xi, r, lambda, obs);
    case Op::sub: return eval_node(*n.a, xi, r, lambda, obs) - eval_node(*n.b, xi, r, lambda, obs);
    case Op::mul: return eval_node(*n.a, xi, r, lambda, obs) * eval_node(*n.b, xi, r, lambda, obs);
    case Op::div: {
      const T num = eval_node(*n.a, xi, r, lambda, obs);
      return num * recip(eval_node(*n.b, xi, r, lambda, obs));
    }
    case Op::neg: return -eval_node(*n.a, xi, r, lambda, obs);
    case Op::pow: {
      const T base = eval_node(*n.a, xi, r, lambda, obs);
      if (n.num < 0) return recip(pow_frac(base, -n.num, n.den));
      return pow_frac(base, n.num, n.den);
    }
    case Op::call: break;
  }
  const T x = eval_node(*n.a, xi, r, lambda, obs);
  switch (n.fn) {
    case Fn::sin: return sin(x);
    case Fn::cos: return cos(x);
    case Fn::tan: return sin(x) * recip(cos(x));
    case Fn::cot: return cos(x) * recip(sin(x));
    case Fn::sec: return recip(cos(x));
    case Fn::csc: return recip(sin(x));
    case Fn::sinh: return sinh(x);
    case Fn::cosh: return cosh(x);
    case Fn::tanh: return sinh(x) * recip(cosh(x));
    case Fn::coth: return cosh(x) * recip(sinh(x));
    case Fn::sech: return recip(cosh(x));
    case Fn::csch: return recip(sinh(x));
    case Fn::sqrt: return pow_frac(x, 1, 2);
    case Fn::exp: return exp(x);
  }
  return x;
}

}  // namespace detail

template <class T>
T Formula::evaluate(const T& xi, double r, double lambda) const {
  detail::NoObserver obs;
  return detail::eval_node(*root_, xi, T(r), T(lambda), obs);
}

}  // namespace cdg::cat
