#include "cdgkit/catalog/formula.hpp"

#include <cctype>
#include <cmath>
#include <numeric>
#include <utility>

#include "cdgkit/errors.hpp"

namespace cdg::cat {

namespace {

using Node = FormulaNode;
using NodePtr = std::shared_ptr<const FormulaNode>;
using Op = FormulaNode::Op;

constexpr std::pair<const char*, Fn> kFunctions[] = {
    {"sin", Fn::sin},   {"cos", Fn::cos},   {"tan", Fn::tan},   {"cot", Fn::cot},   {"sec", Fn::sec},
    {"csc", Fn::csc},   {"sinh", Fn::sinh}, {"cosh", Fn::cosh}, {"tanh", Fn::tanh}, {"coth", Fn::coth},
    {"sech", Fn::sech}, {"csch", Fn::csch}, {"sqrt", Fn::sqrt}, {"exp", Fn::exp},
};

NodePtr leaf(Op op, long num = 0, long den = 1) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->num = num;
  n->den = den;
  return n;
}

NodePtr binary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr unary_node(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr value = expression();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return value;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expression() {
    NodePtr value = term();
    for (;;) {
      if (accept('+')) {
        value = binary(Op::add, value, term());
      } else if (accept('-')) {
        value = binary(Op::sub, value, term());
      } else {
        return value;
      }
    }
  }

  NodePtr term() {
    NodePtr value = unary();
    for (;;) {
      if (accept('*')) {
        value = binary(Op::mul, value, unary());
      } else if (accept('/')) {
        value = binary(Op::div, value, unary());
      } else {
        return value;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return unary_node(Op::neg, unary());
    return power();
  }

  long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    if (pos_ - start > 15) fail("integer literal too long");
    return std::stol(std::string(text_.substr(start, pos_ - start)));
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!accept('^')) return base;
    long num = 0, den = 1;
    if (accept('(')) {
      const bool negative = accept('-');
      num = integer();
      if (negative) num = -num;
      if (accept('/')) den = integer();
      expect(')');
    } else {
      const bool negative = accept('-');
      num = integer();
      if (negative) num = -num;
    }
    if (den == 0) fail("zero denominator in exponent");
    const long g = std::gcd(num, den);
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->num = num / g;
    n->den = den / g;
    n->a = std::move(base);
    return n;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of formula");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return leaf(Op::constant, integer());
    if (accept('(')) {
      NodePtr inner = expression();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "xi") return leaf(Op::xi);
      if (word == "r") return leaf(Op::r);
      if (word == "lambda") return leaf(Op::lambda);
      for (const auto& [name, fn] : kFunctions) {
        if (word != name) continue;
        expect('(');
        auto n = std::make_shared<Node>();
        n->op = Op::call;
        n->fn = fn;
        n->a = expression();
        expect(')');
        return n;
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength for parenthesization.
int precedence(const Node& n) {
  switch (n.op) {
    case Op::add:
    case Op::sub: return 1;
    case Op::mul:
    case Op::div:
    case Op::neg: return 2;
    case Op::constant: return n.num < 0 || n.den != 1 ? 2 : 4;
    case Op::pow: return 3;
    default: return 4;
  }
}

std::string ratio_text(long num, long den) {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string text(const Node& n);

std::string wrap(const Node& n, int min_prec) {
  const std::string s = text(n);
  return precedence(n) < min_prec ? "(" + s + ")" : s;
}

std::string text(const Node& n) {
  switch (n.op) {
    case Op::constant: return ratio_text(n.num, n.den);
    case Op::xi: return "xi";
    case Op::r: return "r";
    case Op::lambda: return "lambda";
    case Op::add: return wrap(*n.a, 1) + " + " + wrap(*n.b, 1);
    case Op::sub: return wrap(*n.a, 1) + " - " + wrap(*n.b, 2);
    case Op::mul: return wrap(*n.a, 2) + "*" + wrap(*n.b, 3);
    case Op::div: return wrap(*n.a, 2) + "/" + wrap(*n.b, 3);
    case Op::neg: return "-" + wrap(*n.a, 3);
    case Op::pow: {
      const std::string e = n.den == 1 && n.num >= 0 ? ratio_text(n.num, 1) : "(" + ratio_text(n.num, n.den) + ")";
      return wrap(*n.a, 4) + "^" + e;
    }
    case Op::call: return std::string(fn_name(n.fn)) + "(" + text(*n.a) + ")";
  }
  return {};
}

std::string latex(const Node& n);

std::string latex_wrap(const Node& n, int min_prec) {
  const std::string s = latex(n);
  return precedence(n) < min_prec ? "\\left(" + s + "\\right)" : s;
}

std::string latex(const Node& n) {
  switch (n.op) {
    case Op::constant:
      return n.den == 1 ? std::to_string(n.num)
                        : std::string(n.num < 0 ? "-" : "") + "\\frac{" + std::to_string(std::labs(n.num)) + "}{" +
                              std::to_string(n.den) + "}";
    case Op::xi: return "\\xi";
    case Op::r: return "r";
    case Op::lambda: return "\\lambda";
    case Op::add: return latex_wrap(*n.a, 1) + " + " + latex_wrap(*n.b, 1);
    case Op::sub: return latex_wrap(*n.a, 1) + " - " + latex_wrap(*n.b, 2);
    case Op::mul: return latex_wrap(*n.a, 2) + " " + latex_wrap(*n.b, 3);
    case Op::div: return "\\frac{" + latex(*n.a) + "}{" + latex(*n.b) + "}";
    case Op::neg: return "-" + latex_wrap(*n.a, 3);
    case Op::pow:
      if (n.num == 1 && n.den > 1) return "\\sqrt[" + std::to_string(n.den) + "]{" + latex(*n.a) + "}";
      return "{" + latex_wrap(*n.a, 4) + "}^{" + ratio_text(n.num, n.den) + "}";
    case Op::call:
      if (n.fn == Fn::sqrt) return "\\sqrt{" + latex(*n.a) + "}";
      switch (n.fn) {
        case Fn::sech:
        case Fn::csch: return "\\operatorname{" + std::string(fn_name(n.fn)) + "}\\left(" + latex(*n.a) + "\\right)";
        default: return "\\" + std::string(fn_name(n.fn)) + "\\left(" + latex(*n.a) + "\\right)";
      }
  }
  return {};
}

bool uses_xi(const Node& n) {
  if (n.op == Op::xi) return true;
  return (n.a && uses_xi(*n.a)) || (n.b && uses_xi(*n.b));
}

}  // namespace

const char* fn_name(Fn f) {
  for (const auto& [name, fn] : kFunctions) {
    if (fn == f) return name;
  }
  return "?";
}

Formula::Formula() : root_(leaf(Op::constant, 0)) {}

Formula Formula::parse(std::string_view text) { return Formula(Parser(text).parse()); }

Formula Formula::constant(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  return Formula(leaf(Op::constant, num / (g == 0 ? 1 : g), den / (g == 0 ? 1 : g)));
}

std::string Formula::to_string() const { return text(*root_); }
std::string Formula::to_latex() const { return latex(*root_); }
bool Formula::depends_on_xi() const { return uses_xi(*root_); }
bool Formula::is_zero() const { return root_->op == Op::constant && root_->num == 0; }

PoleScan Formula::pole_scan(double xi, double r, double lambda) const {
  PoleScan scan;
  auto obs = [&](const Dual<double>& d) {
    const double mag = std::fabs(d.v);
    scan.min_denominator = std::min(scan.min_denominator, mag);
    if (d.d != 0.0) scan.min_distance = std::min(scan.min_distance, mag / std::fabs(d.d));
  };
  detail::eval_node(*root_, Dual<double>(xi, 1.0), Dual<double>(r), Dual<double>(lambda), obs);
  return scan;
}

Formula operator+(const Formula& a, const Formula& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Formula(binary(Op::add, a.root_, b.root_));
}
Formula operator-(const Formula& a, const Formula& b) {
  if (b.is_zero()) return a;
  return Formula(binary(Op::sub, a.root_, b.root_));
}
Formula operator*(const Formula& a, const Formula& b) { return Formula(binary(Op::mul, a.root_, b.root_)); }
Formula operator/(const Formula& a, const Formula& b) { return Formula(binary(Op::div, a.root_, b.root_)); }
Formula Formula::operator-() const { return Formula(unary_node(Op::neg, root_)); }

}  // namespace cdg::cat
