#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cdgkit/sysgen/sysgen.hpp"

namespace cdg::gen {

/// variable is a root of poly (univariate in variable once every other
/// symbol of poly has a value).
struct ResidualConstraint {
  Symbol variable = Symbol::a0;
  ParamPoly poly;
};

/// One consistent branch of the m = 1 system with e, rho fixed.
///
/// assignments map solved unknowns to polynomials in the free symbols and
/// the constrained variables; constraints are solved in order.
struct SolutionBranch {
  std::string id;
  int e_val = 1;
  int rho_val = -1;
  std::map<Symbol, ParamPoly> assignments;
  std::vector<ResidualConstraint> constraints;
  std::vector<std::string> assumptions;
  std::vector<Symbol> free_symbols;
  /// Worst relative annihilation residual over the certificate samples.
  double certificate_residual = 0.0;
  unsigned certificate_samples = 0;
};

/// A branch ruled out because the system reduces to a nonzero constant.
struct Refutation {
  std::vector<std::string> assumptions;
  ParamPoly witness;
};

struct SolveResult {
  std::vector<SolutionBranch> branches;
  std::vector<Refutation> refutations;
  /// Assumption paths where no elimination rule applied (not emitted).
  std::vector<std::vector<std::string>> unresolved;
};

struct SolveOptions {
  std::uint64_t seed = 1;
  unsigned certificate_samples = 5;
  double certificate_tolerance = 1e-10;
};

/// Branch enumeration for the m = 1 system: mu^2 + rho != 0 versus
/// mu^2 + rho = 0, then b1 = 0 versus b1 != 0, then triangular
/// back-substitution over a1, b1, a0, lambda. Every emitted branch carries a
/// numeric annihilation certificate.
SolveResult solve_m1(const AlgebraicSystem& system, int e_val, int rho_val, const SolveOptions& options = {});

/// Numeric parameter points of a branch at the given inputs. Free r and
/// lambda take the given values, other free symbols take their entry in
/// `free_values` (default 1); every constraint root combination yields one
/// point. Values of e, rho are the branch's.
std::vector<HighAssignment> instantiate(const SolutionBranch& branch, const HighComplex& r, const HighComplex& lambda,
                                        const std::map<Symbol, HighComplex>& free_values = {});

/// Roots of a univariate polynomial with numeric coefficients, degree <= 2.
std::vector<HighComplex> surd_roots(const std::vector<HighComplex>& coefficients);

/// Exact Gaussian-rational roots of a univariate polynomial in `variable`
/// (with constant coefficients), distinct, found by numeric isolation and
/// exact verification. Roots outside Q(i) are not returned.
std::vector<GaussianRational> rational_roots(const ParamPoly& poly, Symbol variable);

}  // namespace cdg::gen
