#include "cdgkit/catalog/riccati.hpp"

#include <cmath>
#include <limits>

namespace cdg::cat {

namespace {

constexpr std::pair<const char*, CaseId> kCaseNames[] = {
    {"I", CaseId::I}, {"II_sec", CaseId::II_sec}, {"II_csc", CaseId::II_csc}, {"III", CaseId::III}, {"IV", CaseId::IV},
};

}  // namespace

const char* case_name(CaseId c) {
  for (const auto& [name, id] : kCaseNames) {
    if (id == c) return name;
  }
  return "?";
}

CaseId case_from_name(const std::string& name) {
  for (const auto& [n, id] : kCaseNames) {
    if (name == n) return id;
  }
  throw std::invalid_argument("unknown Riccati case '" + name + "'");
}

std::pair<int, int> case_signs(CaseId c) {
  switch (c) {
    case CaseId::II_sec:
    case CaseId::II_csc: return {1, -1};
    case CaseId::III: return {-1, -1};
    case CaseId::IV: return {-1, 1};
    case CaseId::I: break;
  }
  return {1, 1};
}

void validate_case(CaseId c, const RiccatiParams& p) {
  if (p.e_val != 1 && p.e_val != -1) throw DomainError("e must be +1 or -1");
  if (c == CaseId::I) {
    if (p.r != 0.0 || p.mu != 0.0) throw DomainError("Case I requires r = mu = 0");
    return;
  }
  const auto [e, rho] = case_signs(c);
  if (p.e_val != e || p.rho_val != rho) {
    throw DomainError(std::string("Case ") + case_name(c) + " requires e = " + std::to_string(e) +
                      ", rho = " + std::to_string(rho));
  }
  if (!(p.r > 0.0)) throw DomainError(std::string("Case ") + case_name(c) + " requires r > 0");
}

std::string case_sigma_text(CaseId c, long mu_num, long mu_den) {
  const char* f = nullptr;
  switch (c) {
    case CaseId::II_sec: f = "sec"; break;
    case CaseId::II_csc: f = "csc"; break;
    case CaseId::III: f = "sech"; break;
    case CaseId::IV: f = "csch"; break;
    case CaseId::I: throw std::invalid_argument("Case I has no r-parameterized sigma");
  }
  const std::string call = std::string(f) + "(sqrt(r)*xi)";
  if (mu_num == 0) return "r*" + call;
  std::string mu = mu_den == 1 ? std::to_string(std::labs(mu_num))
                               : "(" + std::to_string(std::labs(mu_num)) + "/" + std::to_string(mu_den) + ")";
  const std::string term = (mu == "1" ? std::string() : mu + "*") + call;
  return "r*" + call + "/(1 " + (mu_num < 0 ? "- " : "+ ") + term + ")";
}

CasePoleScan case_pole_scan(CaseId c, const RiccatiParams& p, double xi) {
  using D = Dual<double>;
  const double s = c == CaseId::I ? 1.0 : std::sqrt(p.r);
  const D arg(s * xi, s);
  D base;
  switch (c) {
    case CaseId::I: base = D(xi, 1.0); break;
    case CaseId::II_sec: base = cos(arg); break;
    case CaseId::II_csc: base = sin(arg); break;
    case CaseId::III: base = cosh(arg); break;
    case CaseId::IV: base = sinh(arg); break;
  }
  // 1 + mu/base vanishes where base + mu does.
  const D shifted = base + D(p.mu);
  const auto dist = [](const D& d) {
    return d.d == 0.0 ? std::numeric_limits<double>::infinity() : std::fabs(d.v) / std::fabs(d.d);
  };
  CasePoleScan scan;
  scan.min_denominator = std::fabs(base.v);
  scan.min_distance = dist(base);
  if (c != CaseId::I) {
    scan.min_denominator = std::min(scan.min_denominator, std::fabs(shifted.v));
    scan.min_distance = std::min(scan.min_distance, dist(shifted));
  }
  return scan;
}

std::pair<double, double> eval_sigma_tau(CaseId c, const RiccatiParams& p, double xi) {
  validate_case(c, p);
  const double s = std::sqrt(p.r);
  double den = 0;
  switch (c) {
    case CaseId::I: den = xi; break;
    case CaseId::II_sec: den = std::cos(s * xi); break;
    case CaseId::II_csc: den = std::sin(s * xi); break;
    case CaseId::III: den = 1.0; break;
    case CaseId::IV: den = std::sinh(s * xi); break;
  }
  if (std::fabs(den) < 1e-6) throw DomainError("pole of the closed form at xi = " + std::to_string(xi));
  const auto [sigma, tau] = sigma_tau(c, p, xi);
  if (c != CaseId::I) {
    // sigma = r f / (1 + mu f) also has poles where 1 + mu f = 0.
    if (std::fabs(p.r / sigma) < 1e-6 || !std::isfinite(sigma)) {
      throw DomainError("pole of the closed form at xi = " + std::to_string(xi));
    }
  }
  return {sigma, tau};
}

}  // namespace cdg::cat
