#pragma once

#include <complex>
#include <compare>
#include <string>

#include <gmpxx.h>

#include "cdgkit/numeric_types.hpp"

namespace cdg::sym {

/// Arbitrary-precision rational, always canonical (lowest terms, positive
/// denominator).
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long numerator, long denominator = 1);
/// Parses "p" or "p/q" (optional sign). Throws ParseError.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

template <class Real>
Real to_real(const Rational& q) {
  return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}
template <>
inline double to_real<double>(const Rational& q) {
  return q.get_d();
}

/// Element of Q(i). Closed under the field operations; conj() is an
/// involution.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value) {}  // NOLINT: implicit by design of literals
  GaussianRational(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
  GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  /// |z|^2, exact.
  Rational norm() const { return re_ * re_ + im_ * im_; }
  GaussianRational inverse() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// "3/2", "-i", "1/2 + 3*i". Deterministic.
  std::string to_string() const;
  std::string to_latex() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

GaussianRational pow(GaussianRational base, unsigned exponent);

/// Conversion of exact coefficients into the scalar type of a numeric
/// evaluation.
template <class T>
T coefficient_as(const GaussianRational& z);

template <>
inline GaussianRational coefficient_as<GaussianRational>(const GaussianRational& z) {
  return z;
}
template <>
double coefficient_as<double>(const GaussianRational& z);
template <>
HighReal coefficient_as<HighReal>(const GaussianRational& z);
template <>
inline std::complex<double> coefficient_as<std::complex<double>>(const GaussianRational& z) {
  return {to_real<double>(z.re()), to_real<double>(z.im())};
}
template <>
inline HighComplex coefficient_as<HighComplex>(const GaussianRational& z) {
  return HighComplex(to_real<HighReal>(z.re()), to_real<HighReal>(z.im()));
}

}  // namespace cdg::sym
