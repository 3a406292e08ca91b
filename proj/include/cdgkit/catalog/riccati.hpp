#pragma once

#include <string>
#include <utility>

#include "cdgkit/catalog/jet.hpp"
#include "cdgkit/catalog/formula.hpp"
#include "cdgkit/errors.hpp"

namespace cdg::cat {

/// Closed-form solutions of sigma' = e sigma tau, tau' = e tau^2 - mu sigma + r.
enum class CaseId {
  I,       // r = mu = 0: sigma = C/xi, tau = -1/(e xi)
  II_sec,  // e = 1, rho = -1, r > 0, secant/tangent form
  II_csc,  // e = 1, rho = -1, r > 0, cosecant/cotangent form
  III,     // e = -1, rho = -1, r > 0
  IV,      // e = -1, rho = 1, r > 0
};

const char* case_name(CaseId c);
/// Accepts "I", "II_sec", "II_csc", "III", "IV".
CaseId case_from_name(const std::string& name);

struct RiccatiParams {
  int e_val = 1;
  int rho_val = -1;
  double mu = 0.0;
  double r = 1.0;
  /// Integration constant of Case I.
  double C = 1.0;
};

/// Throws DomainError when the parameters violate the case preconditions.
void validate_case(CaseId c, const RiccatiParams& p);

/// The (e, rho) pair a case requires; Case I accepts either sign of e.
std::pair<int, int> case_signs(CaseId c);

/// Formula text (catalog grammar, r symbolic) of sigma for Cases II-IV
/// with the rational mu = mu_num/mu_den substituted.
std::string case_sigma_text(CaseId c, long mu_num, long mu_den = 1);

/// sigma, tau at xi over any jet type. No precondition or pole checks.
template <class T>
std::pair<T, T> sigma_tau(CaseId c, const RiccatiParams& p, const T& xi) {
  using std::cos, std::cosh, std::sin, std::sinh;
  const T r(p.r), mu(p.mu), one(1);
  if (c == CaseId::I) return {T(p.C) / xi, T(-1.0 / p.e_val) / xi};
  const T s = pow_frac(r, 1, 2);
  const T arg = s * xi;
  T f, g;  // sigma = r f/(1 + mu f), tau = s g/(1 + mu f)
  switch (c) {
    case CaseId::II_sec:
      f = one / cos(arg);
      g = sin(arg) / cos(arg);
      break;
    case CaseId::II_csc:
      f = one / sin(arg);
      g = -(cos(arg) / sin(arg));
      break;
    case CaseId::III:
      f = one / cosh(arg);
      g = sinh(arg) / cosh(arg);
      break;
    default:
      f = one / sinh(arg);
      g = cosh(arg) / sinh(arg);
      break;
  }
  const T den = one + mu * f;
  return {r * f / den, s * g / den};
}

/// Distance estimates to the zeros of the closed form's denominators (the
/// trigonometric/hyperbolic base and 1 + mu f) at xi.
struct CasePoleScan {
  double min_denominator = 0;
  double min_distance = 0;
};
CasePoleScan case_pole_scan(CaseId c, const RiccatiParams& p, double xi);

/// Checked evaluation: validates the case and rejects points where a
/// denominator of the closed form is below 1e-6 in magnitude.
std::pair<double, double> eval_sigma_tau(CaseId c, const RiccatiParams& p, double xi);

}  // namespace cdg::cat
