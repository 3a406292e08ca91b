#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "cdgkit/numeric_types.hpp"

namespace cdg::cat {

/// First-order dual number v + d*eps, eps^2 = 0.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(const T& value, const T& derivative = T(0)) : v(value), d(derivative) {}  // NOLINT: constants promote
  template <class S, class = std::enable_if_t<std::is_arithmetic_v<S> && !std::is_same_v<S, T>>>
  Dual(S value) : v(T(value)), d(T(0)) {}  // NOLINT

  Dual operator-() const { return {-v, -d}; }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T q = v / o.v;
    d = (d - q * o.d) / o.v;
    v = q;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
};

template <class T>
Dual<T> sin(const Dual<T>& x) {
  using std::cos, std::sin;
  return {sin(x.v), cos(x.v) * x.d};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  using std::cos, std::sin;
  return {cos(x.v), -sin(x.v) * x.d};
}
template <class T>
Dual<T> sinh(const Dual<T>& x) {
  using std::cosh, std::sinh;
  return {sinh(x.v), cosh(x.v) * x.d};
}
template <class T>
Dual<T> cosh(const Dual<T>& x) {
  using std::cosh, std::sinh;
  return {cosh(x.v), sinh(x.v) * x.d};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  using std::exp;
  const T e = exp(x.v);
  return {e, e * x.d};
}

/// x^(num/den). Integer exponents use repeated products so negative bases work.
inline double pow_frac(double x, long num, long den) {
  if (den == 1) {
    double acc = 1.0;
    for (long k = 0; k < std::labs(num); ++k) acc *= x;
    return num < 0 ? 1.0 / acc : acc;
  }
  if (num == 1 && den == 2) return std::sqrt(x);
  return std::pow(x, static_cast<double>(num) / static_cast<double>(den));
}

inline HighReal pow_frac(const HighReal& x, long num, long den) {
  if (den == 1) {
    HighReal acc(1);
    for (long k = 0; k < std::labs(num); ++k) acc *= x;
    return num < 0 ? HighReal(1) / acc : acc;
  }
  if (num == 1 && den == 2) return sqrt(x);
  return pow(x, HighReal(num) / HighReal(den));
}

template <class T>
Dual<T> pow_frac(const Dual<T>& x, long num, long den) {
  const T value = pow_frac(x.v, num, den);
  if (x.d == T(0) || num == 0) return {value, T(0)};
  return {value, T(static_cast<double>(num) / static_cast<double>(den)) * pow_frac(x.v, num - den, den) * x.d};
}

/// Truncated Taylor series sum_{k<=N} c[k] h^k with coefficients in T.
template <class T, std::size_t N>
struct Taylor {
  std::array<T, N + 1> c{};

  Taylor() { c.fill(T(0)); }
  Taylor(const T& constant) {  // NOLINT: constants promote
    c.fill(T(0));
    c[0] = constant;
  }
  template <class S, class = std::enable_if_t<std::is_arithmetic_v<S>>>
  Taylor(S constant) : Taylor(T(constant)) {}  // NOLINT

  /// The series of x0 + h.
  static Taylor variable(const T& x0) {
    Taylor t(x0);
    if constexpr (N >= 1) t.c[1] = T(1);
    return t;
  }

  bool is_constant() const {
    for (std::size_t k = 1; k <= N; ++k) {
      if (!(c[k] == T(0))) return false;
    }
    return true;
  }

  /// k-th derivative at the expansion point: k! c[k].
  T derivative(std::size_t k) const {
    T f(1);
    for (std::size_t j = 2; j <= k; ++j) f = f * T(static_cast<double>(j));
    return c[k] * f;
  }

  Taylor operator-() const {
    Taylor r;
    for (std::size_t k = 0; k <= N; ++k) r.c[k] = -c[k];
    return r;
  }
  Taylor& operator+=(const Taylor& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (std::size_t k = 0; k <= N; ++k) {
      T acc(0);
      for (std::size_t j = 0; j <= k; ++j) acc += a.c[j] * b.c[k - j];
      r.c[k] = acc;
    }
    return r;
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q;
    for (std::size_t k = 0; k <= N; ++k) {
      T acc = a.c[k];
      for (std::size_t j = 1; j <= k; ++j) acc -= b.c[j] * q.c[k - j];
      q.c[k] = acc / b.c[0];
    }
    return q;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }
  friend bool operator==(const Taylor& a, const Taylor& b) { return a.c == b.c; }
};

namespace detail {

// Shared recurrence for (sin, cos) and (sinh, cosh): s' = c x', c' = sign s x'.
template <class T, std::size_t N>
void trig_pair(const Taylor<T, N>& x, Taylor<T, N>& s, Taylor<T, N>& c, bool hyperbolic) {
  using std::cos, std::cosh, std::sin, std::sinh;
  s.c[0] = hyperbolic ? sinh(x.c[0]) : sin(x.c[0]);
  c.c[0] = hyperbolic ? cosh(x.c[0]) : cos(x.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    T sk(0), ck(0);
    for (std::size_t j = 1; j <= k; ++j) {
      const T jx = T(static_cast<double>(j)) * x.c[j];
      sk += jx * c.c[k - j];
      ck += jx * s.c[k - j];
    }
    const T inv_k = T(1.0 / static_cast<double>(k));
    s.c[k] = sk * inv_k;
    c.c[k] = hyperbolic ? ck * inv_k : -(ck * inv_k);
  }
}

}  // namespace detail

template <class T, std::size_t N>
Taylor<T, N> sin(const Taylor<T, N>& x) {
  Taylor<T, N> s, c;
  detail::trig_pair(x, s, c, false);
  return s;
}
template <class T, std::size_t N>
Taylor<T, N> cos(const Taylor<T, N>& x) {
  Taylor<T, N> s, c;
  detail::trig_pair(x, s, c, false);
  return c;
}
template <class T, std::size_t N>
Taylor<T, N> sinh(const Taylor<T, N>& x) {
  Taylor<T, N> s, c;
  detail::trig_pair(x, s, c, true);
  return s;
}
template <class T, std::size_t N>
Taylor<T, N> cosh(const Taylor<T, N>& x) {
  Taylor<T, N> s, c;
  detail::trig_pair(x, s, c, true);
  return c;
}
template <class T, std::size_t N>
Taylor<T, N> exp(const Taylor<T, N>& x) {
  using std::exp;
  Taylor<T, N> e;
  e.c[0] = exp(x.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    T acc(0);
    for (std::size_t j = 1; j <= k; ++j) acc += T(static_cast<double>(j)) * x.c[j] * e.c[k - j];
    e.c[k] = acc * T(1.0 / static_cast<double>(k));
  }
  return e;
}

template <class T, std::size_t N>
Taylor<T, N> pow_frac(const Taylor<T, N>& x, long num, long den) {
  if (den == 1 && num >= 0) {
    Taylor<T, N> acc(T(1));
    for (long k = 0; k < num; ++k) acc *= x;
    return acc;
  }
  Taylor<T, N> y(pow_frac(x.c[0], num, den));
  if (x.is_constant()) return y;
  const double p = static_cast<double>(num) / static_cast<double>(den);
  // y_k = 1/(k x0) sum_{j=1}^k ((p+1) j - k) x_j y_{k-j}
  for (std::size_t k = 1; k <= N; ++k) {
    T acc(0);
    for (std::size_t j = 1; j <= k; ++j) {
      acc += T((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * x.c[j] * y.c[k - j];
    }
    y.c[k] = acc / (T(static_cast<double>(k)) * x.c[0]);
  }
  return y;
}

/// Jet in x with first-order t dependence: coefficients carry d/dt.
using SpaceTimeJet = Taylor<Dual<double>, 5>;

}  // namespace cdg::cat
