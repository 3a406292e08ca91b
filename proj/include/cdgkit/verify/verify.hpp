#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdgkit/catalog/catalog.hpp"
#include "cdgkit/reduction/reduction.hpp"
#include "cdgkit/sysgen/sysgen.hpp"

namespace cdg::ver {

using cat::ClosedForm;

/// Real coefficients of u_t + omega u5 + alpha u u3 + beta u1 u2 + gamma u^2 u1.
struct PdeCoefficients {
  double omega = 1, alpha = 30, beta = 30, gamma = 180;

  static PdeCoefficients from(const red::KdV5Params& p);
  PdeCoefficients scaled(double c) const { return {c * omega, c * alpha, c * beta, c * gamma}; }
};

struct GridPoint {
  double x = 0;
  double t = 0;
};

enum class Oracle { jet = 0, fd = 1 };
const char* oracle_name(Oracle o);

enum class PointVerdict { pass, fail, singular_skipped };
const char* point_verdict_name(PointVerdict v);

enum class Verdict { pass, fail, unresolved };
const char* verdict_name(Verdict v);

/// The five PDE terms at a point, in the order u_t, omega u5, alpha u u3,
/// beta u1 u2, gamma u^2 u1.
using PdeTerms = std::array<double, 5>;

/// Signed residual and the relative residual |sum| / max |term|.
struct TermResidual {
  double residual = 0;
  double scale = 0;
  double rel = 0;
};
TermResidual combine_terms(const PdeTerms& terms);

PdeTerms jet_terms(const ClosedForm& u, const PdeCoefficients& p, double x, double t);
/// 50-digit central differences, Richardson-extrapolated over (h, h/2).
PdeTerms fd_terms(const ClosedForm& u, const PdeCoefficients& p, double x, double t, double h);

struct PointResidual {
  double x = 0;
  double t = 0;
  PointVerdict verdict = PointVerdict::pass;
  /// Indexed by Oracle; has[o] is false when that oracle skipped the point.
  std::array<bool, 2> has{};
  std::array<TermResidual, 2> value{};
};

struct OracleStats {
  bool evaluated = false;
  double max_abs = 0;
  double max_rel = 0;
  /// Index into points of the largest relative residual.
  std::size_t worst_index = 0;
  std::size_t skipped = 0;
};

struct ResidualReport {
  std::string family_id;
  double lambda = 0;
  double r = 0;
  double tolerance = 1e-6;
  double fd_step = 0;
  std::vector<PointResidual> points;
  std::array<OracleStats, 2> oracle{};
  /// PASS when every evaluated oracle is below tolerance on its points.
  PointVerdict verdict = PointVerdict::pass;

  const OracleStats& stats(Oracle o) const { return oracle[static_cast<std::size_t>(o)]; }
  /// Largest max_rel over the evaluated oracles.
  double max_rel() const;
  /// The point with the largest relative residual over both oracles.
  const PointResidual& worst_point() const;
};

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr double kDefaultFdStep = 1e-4;
inline constexpr double kGridMargin = 0.05;

/// Jet oracle. Points within kPoleMargin of a pole are SINGULAR-SKIPPED;
/// throws DomainError when every point is.
ResidualReport pde_residual(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid,
                            double tolerance = kDefaultTolerance);
/// FD oracle. Points closer than 8h (in xi, per unit of |speed| for the t
/// stencil) to a pole are SINGULAR-SKIPPED; throws as pde_residual.
ResidualReport fd_residual(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid,
                           double h = kDefaultFdStep, double tolerance = kDefaultTolerance);
/// Both oracles on the same grid.
ResidualReport residual_report(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid,
                               double h = kDefaultFdStep, double tolerance = kDefaultTolerance);

struct GridSpec {
  std::size_t points = 40;
  double x_min = -10, x_max = 10;
  double t_min = 0, t_max = 1;
  double margin = kGridMargin;
};

/// Seeded rejection sampling of points at least `margin` from every pole.
/// Throws DomainError when too few regular points are found.
std::vector<GridPoint> regular_grid(const ClosedForm& u, const GridSpec& spec, std::uint64_t seed);

struct RiccatiDeviation {
  double sigma_ode = 0;
  double tau_ode = 0;
  /// NaN for Case I, which has no first integral with r = 0.
  double first_integral = 0;
  std::size_t points = 0;

  double max() const;
};

/// Jet (dual-number) check of sigma' = e sigma tau, tau' = e tau^2 - mu sigma + r
/// and of tau^2 + e (r - 2 mu sigma + ((mu^2 + rho)/r) sigma^2) = 0.
RiccatiDeviation check_riccati_and_integral(cat::CaseId c, const cat::RiccatiParams& p,
                                            const std::vector<double>& xi_grid);
/// Seeded points in [lo, hi] at least `margin` from the case's poles.
std::vector<double> regular_xi_grid(cat::CaseId c, const cat::RiccatiParams& p, std::size_t n, double lo, double hi,
                                    double margin, std::uint64_t seed);

struct AnnihilationResult {
  /// Relative residual (|sum| / sum |terms|) per equation, system order.
  std::vector<double> residuals;
  double max_rel = 0;
  std::size_t worst_equation = 0;
};
AnnihilationResult annihilation_check(const gen::AlgebraicSystem& system, const gen::HighAssignment& values);

/// Parameter maps of a family at an instance: header values as printed, or
/// the effective Riccati parameters with a0 equal to the offset.
gen::HighAssignment printed_assignment(const cat::SolutionFamily& f, const cat::Instance& inst);
gen::HighAssignment effective_assignment(const cat::SolutionFamily& f, const cat::Instance& inst);

struct SampleReport {
  cat::Instance instance;
  std::uint64_t grid_seed = 0;
  ResidualReport residual;
  AnnihilationResult annihilation_printed;
  AnnihilationResult annihilation_effective;
};

struct NegativeControl {
  double shape_scale = 1.1;
  double max_rel = 0;
  bool flipped = false;
};

struct FamilyReport {
  std::string family_id;
  int table = 0;
  int row = 0;
  std::vector<SampleReport> samples;
  std::optional<NegativeControl> negative_control;
  Verdict verdict = Verdict::unresolved;
  std::string message;

  /// Worst point over the samples: (sample index, point).
  std::pair<std::size_t, const PointResidual*> worst() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  double tolerance = kDefaultTolerance;
  double fd_step = kDefaultFdStep;
  std::size_t samples = 2;
  GridSpec grid;
  double negative_scale = 1.1;
  double negative_threshold = 1e-3;
  red::KdV5Params pde = red::KdV5Params::cdg();
};

/// Admissible (r, lambda) samples drawn from a generator seeded by the
/// options seed and the family id.
std::vector<cat::Instance> choose_samples(const cat::SolutionFamily& f, const VerifyOptions& options);

/// Verifies at the given instances, or at choose_samples when none given.
FamilyReport verify_family(const cat::SolutionFamily& f, const VerifyOptions& options,
                           const std::vector<cat::Instance>& instances = {});

struct CatalogReport {
  VerifyOptions options;
  std::vector<FamilyReport> families;
  std::size_t pass_count = 0;
  std::size_t fail_count = 0;
  std::size_t unresolved_count = 0;
};

/// Every catalog family, verified in parallel and ordered by table position.
CatalogReport verify_all(const VerifyOptions& options = {});

/// Tab-separated "x u residual" lines at time t on n points of [x0, x1];
/// residual is the jet residual, "nan" at singular points.
std::string plot_data(const ClosedForm& u, const PdeCoefficients& p, double t, double x0, double x1, std::size_t n);

}  // namespace cdg::ver
