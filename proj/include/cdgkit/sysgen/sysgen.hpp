#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdgkit/numeric_types.hpp"
#include "cdgkit/reduction/reduction.hpp"
#include "cdgkit/symkernel/param_poly.hpp"

namespace cdg::gen {

using red::DiffPoly;
using sym::GaussianRational;
using sym::ParamPoly;
using sym::Rational;
using sym::Symbol;

/// Linear degree expression m_coeff * m + constant.
struct DegreeExpr {
  Rational m_coeff;
  Rational constant;

  Rational at(unsigned m) const { return m_coeff * m + constant; }
  /// "m+5", "3m+1/2", "2m".
  std::string to_string() const;
  friend bool operator==(const DegreeExpr& a, const DegreeExpr& b) {
    return a.m_coeff == b.m_coeff && a.constant == b.constant;
  }
};

struct LeadingDegree {
  DegreeExpr degree;
  std::vector<std::string> sources;  // rendered V-products producing this degree
};

/// Degree bookkeeping under one weighting of tau. With generic parameters
/// tau counts like sigma (weight 1). When mu^2 + rho = 0 the first integral
/// makes tau^2 linear in sigma, so tau has weight 1/2 and every derivative
/// adds 1/2 to the degree.
struct WeightingReport {
  std::string name;
  Rational tau_weight;
  std::vector<LeadingDegree> degrees;  // distinct expressions, descending in m_coeff
  std::vector<unsigned> admitted;      // m in 1..10 where >= 2 distinct expressions tie at the maximum
};

struct BalanceReport {
  std::vector<WeightingReport> weightings;
  std::set<unsigned> admissible_m;
};

inline constexpr unsigned kMaxBalancedOrder = 10;

BalanceReport balance_degrees(const DiffPoly& ode);

/// Ordered coefficient equations, descending by (sigma power, tau power).
struct AlgebraicSystem {
  std::vector<ParamPoly> equations;
  std::vector<std::pair<unsigned, unsigned>> provenance;
  /// The substituted expression was multiplied by r^k before collection.
  unsigned r_clearing_power = 0;

  std::size_t size() const { return equations.size(); }
};

AlgebraicSystem generate_system(const DiffPoly& ode, unsigned m,
                                red::DerivativeRoute route = red::DerivativeRoute::deferred);

/// LaTeX listing, one numbered equation per line.
std::string system_to_latex(const AlgebraicSystem& system);

/// Equations tagged with their published numbers.
struct ReferenceSystem {
  std::vector<int> numbers;
  std::vector<ParamPoly> equations;
};

/// Reads "<n>: <polynomial>" lines; '#' starts a comment. Throws ParseError
/// (with the line number in the message) or std::runtime_error on I/O.
ReferenceSystem load_reference_system(const std::filesystem::path& path);
ReferenceSystem parse_reference_system(const std::string& text);

std::filesystem::path default_reference_path();

struct MatchEntry {
  int reference_number = 0;
  bool matched = false;
  std::optional<std::size_t> generated_index;
  std::pair<unsigned, unsigned> group{0, 0};
  /// generated = factor * r^r_power * e^e_power * reference.
  GaussianRational factor;
  int r_power = 0;
  int e_power = 0;
};

struct MatchReport {
  std::vector<MatchEntry> entries;
  std::size_t generated_count = 0;
  unsigned points = 0;
  std::uint64_t seed = 0;

  bool all_matched() const;
};

/// Proportionality after removing the monomial content in r and e from
/// both sides, tested exactly at `points` random rational parameter points.
MatchReport check_structural_match(const AlgebraicSystem& generated, const ReferenceSystem& reference,
                                   unsigned points = 24, std::uint64_t seed = 20240611);

using HighAssignment = std::array<HighComplex, sym::kSymbolCount>;

/// |sum of terms| / sum |terms| for one equation (0 when every term is 0).
HighReal relative_residual(const ParamPoly& equation, const HighAssignment& values);

}  // namespace cdg::gen
