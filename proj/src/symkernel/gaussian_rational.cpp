#include "cdgkit/symkernel/gaussian_rational.hpp"

#include <cctype>

#include "cdgkit/errors.hpp"

namespace cdg::sym {

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) throw DivisionByZero("rational with zero denominator");
  Rational q(numerator, denominator);
  q.canonicalize();
  return q;
}

Rational parse_rational(const std::string& text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_int = [&]() -> Integer {
    skip();
    std::size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    std::size_t digits = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) throw ParseError("expected integer in '" + text + "'", pos);
    std::string s = text.substr(start, pos - start);
    if (s[0] == '+') s.erase(0, 1);
    return Integer(s);
  };
  Integer num = read_int();
  Integer den = 1;
  skip();
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = read_int();
    if (den == 0) throw DivisionByZero("rational with zero denominator: '" + text + "'");
  }
  skip();
  if (pos != text.size()) throw ParseError("trailing characters in rational '" + text + "'", pos);
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

GaussianRational GaussianRational::inverse() const {
  Rational n = norm();
  if (sgn(n) == 0) throw DivisionByZero("inverse of zero Gaussian rational");
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (sgn(o.im_) == 0) {
    if (sgn(o.re_) == 0) throw DivisionByZero("division by zero Gaussian rational");
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string GaussianRational::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_im) return re_.get_str();
  std::string im_part;
  Rational abs_im = abs(im_);
  im_part = (abs_im == 1) ? "i" : abs_im.get_str() + "*i";
  if (!has_re) return (sgn(im_) < 0 ? "-" : "") + im_part;
  return re_.get_str() + (sgn(im_) < 0 ? " - " : " + ") + im_part;
}

namespace {
std::string latex_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  std::string sign = sgn(q) < 0 ? "-" : "";
  return sign + "\\frac{" + Integer(abs(q.get_num())).get_str() + "}{" + q.get_den().get_str() + "}";
}
}  // namespace

std::string GaussianRational::to_latex() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_im) return latex_rational(re_);
  Rational abs_im = abs(im_);
  std::string im_part = (abs_im == 1) ? "i" : latex_rational(abs_im) + " i";
  if (!has_re) return (sgn(im_) < 0 ? "-" : "") + im_part;
  return "\\left(" + latex_rational(re_) + (sgn(im_) < 0 ? " - " : " + ") + im_part + "\\right)";
}

GaussianRational pow(GaussianRational base, unsigned exponent) {
  GaussianRational result(1);
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

}  // namespace cdg::sym

namespace cdg::sym {

template <>
double coefficient_as<double>(const GaussianRational& z) {
  if (!z.is_real()) throw DomainError("complex coefficient " + z.to_string() + " in a real evaluation");
  return to_real<double>(z.re());
}

template <>
HighReal coefficient_as<HighReal>(const GaussianRational& z) {
  if (!z.is_real()) throw DomainError("complex coefficient " + z.to_string() + " in a real evaluation");
  return to_real<HighReal>(z.re());
}

}  // namespace cdg::sym
