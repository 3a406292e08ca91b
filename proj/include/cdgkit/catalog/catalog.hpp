#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cdgkit/catalog/formula.hpp"
#include "cdgkit/catalog/riccati.hpp"
#include "cdgkit/symkernel/gaussian_rational.hpp"

namespace cdg::gen {
struct SolutionBranch;
}

namespace cdg::cat {

using sym::GaussianRational;

/// How the Riccati r of the effective parameters follows from an instance.
enum class RRule {
  given,            // r is the instance r
  negated,          // r_eff = -r (forms printed for r < 0)
  two_sqrt_lambda,  // r_eff = 2 sqrt(lambda); the instance r is derived too
};

const char* r_rule_name(RRule rule);

/// Parameters under which the row's form arises from a Riccati case.
struct EffectiveParams {
  CaseId case_id = CaseId::III;
  int e_val = -1;
  int rho_val = -1;
  GaussianRational mu;
  GaussianRational a1;
  RRule r_rule = RRule::given;
};

struct Admissibility {
  /// Required sign of the instance r: +1, -1, or 0 when r is derived from lambda.
  int r_sign = 1;
  /// r^2 - 4 lambda >= 0 (the surd in a0).
  bool needs_real_surd = false;
  /// lambda > 0 (sqrt(lambda) and its fourth root).
  bool needs_positive_lambda = false;

  std::string describe() const;
};

/// One solution row: printed data plus the offset/shape split u = a0 + shape.
struct SolutionFamily {
  std::string id;  // "T3R6", or a solver branch id
  int table = 0;   // 0 for solver-derived families
  int row = 0;
  /// Header values as printed.
  int e_printed = 1;
  int rho_printed = -1;
  std::string r_condition;  // "r>0", "r<0" or ""
  GaussianRational mu_printed;
  GaussianRational a1_printed;
  Formula a0_printed;
  GaussianRational b1;
  /// Printed u(x,t) is offset + shape, xi = x + lambda t.
  Formula offset;
  Formula shape;
  EffectiveParams effective;
  Admissibility admissibility;
  /// No poles on the real line (sech/cosh forms).
  bool bounded = false;
  /// Solver families with lambda fixed by r (e.g. lambda = -r^2); empty otherwise.
  std::optional<Formula> lambda_rule;
  std::string note;

  Formula u() const { return offset + shape; }
};

/// All 21 rows of the four solution tables, in table order.
const std::vector<SolutionFamily>& list_families();
/// Throws std::out_of_range for an unknown id.
const SolutionFamily& find_family(const std::string& id);

/// Instance parameters after admissibility checks.
struct Instance {
  double r = 0;
  double lambda = 0;
  double r_eff = 0;
};

/// Validates (r, lambda) for the family; r may be omitted when derived.
/// When the family has a lambda rule, lambda is recomputed from r. Throws
/// DomainError with the admissibility explanation.
Instance instantiate(const SolutionFamily& f, double lambda, std::optional<double> r);

/// Derivatives of u at a point: value, d^k u/dx^k for k = 1..5, du/dt.
struct Jet {
  double value = 0;
  std::array<double, 5> dx{};
  double dt = 0;
};

/// u(x,t) = offset(xi) + shape_scale * shape(xi), xi = x + speed t.
class ClosedForm {
 public:
  ClosedForm(Formula offset, Formula shape, double r, double lambda);

  double r() const { return r_; }
  double lambda() const { return lambda_; }
  double speed() const { return speed_; }
  double shape_scale() const { return shape_scale_; }

  /// Speed defaults to lambda; the scaling test changes it independently.
  ClosedForm with_speed(double speed) const;
  /// Negative controls scale the shape (the a1 sigma part).
  ClosedForm with_shape_scale(double scale) const;

  double operator()(double x, double t) const;
  HighReal evaluate_high(const HighReal& x, const HighReal& t) const;
  /// Jet arithmetic in x (degree 5) composed with a dual number in t.
  Jet jet(double x, double t) const;
  PoleScan pole_scan(double x, double t) const;
  bool regular(double x, double t, double margin) const { return pole_scan(x, t).regular(margin); }

  std::string to_string() const;

 private:
  Formula offset_;
  Formula shape_;
  double r_;
  double lambda_;
  double speed_;
  double shape_scale_ = 1.0;
};

inline constexpr double kPoleMargin = 1e-3;

/// Closed-form evaluator of a family at an admissible instance.
ClosedForm build_solution(const SolutionFamily& f, double lambda, std::optional<double> r = std::nullopt);

/// Jet at a regular point; DomainError within kPoleMargin of a pole.
Jet taylor_eval(const ClosedForm& u, double x, double t);

/// Family u = a0 + a1 sigma built from a real solver branch: the case comes
/// from (e, rho) (Case II uses the sec form), a0 from the branch assignment
/// or from constraint root `root_index` (0 takes the "-" surd).
SolutionFamily family_from_branch(const gen::SolutionBranch& branch, std::size_t root_index = 0);

}  // namespace cdg::cat
