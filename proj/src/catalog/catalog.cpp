#include "cdgkit/catalog/catalog.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cdgkit/sysgen/solver.hpp"

namespace cdg::cat {

namespace {

using sym::make_rational;
using sym::Rational;

GaussianRational real(long p, long q = 1) { return GaussianRational(make_rational(p, q)); }
GaussianRational imag(long p, long q = 1) { return GaussianRational(Rational(0), make_rational(p, q)); }

const char* const kAm = "1/60*(5*r - sqrt(5)*sqrt(r^2 - 4*lambda))";
const char* const kAp = "1/60*(5*r + sqrt(5)*sqrt(r^2 - 4*lambda))";
const char* const kBm = "1/60*(-5*r - sqrt(5)*sqrt(r^2 - 4*lambda))";
const char* const kBp = "1/60*(-5*r + sqrt(5)*sqrt(r^2 - 4*lambda))";

struct RowSpec {
  int table;
  int row;
  GaussianRational mu;
  GaussianRational a1;
  const char* a0;
  const char* offset;
  const char* shape;
  CaseId eff_case;
  int eff_mu;
  GaussianRational eff_a1;
  RRule rule;
  bool bounded;
  const char* note;
};

struct TableHeader {
  int e;
  int rho;
  const char* r_condition;
};

constexpr TableHeader kHeaders[] = {{1, 1, "r>0"}, {-1, 1, "r<0"}, {1, -1, ""}, {-1, -1, "r>0"}};

std::vector<RowSpec> row_specs() {
  const char* t1_note = "header rho = 1; the csc form is Case II, which needs rho = -1";
  const char* t2_note = "Case IV form continued to r < 0 with mu = +-i; equals the Table 1 form at r_eff = -r";
  return {
      {1, 1, real(-1), real(1, 2), kAm, kAm, "r*csc(sqrt(r)*xi)/(2*(1 - csc(sqrt(r)*xi)))", CaseId::II_csc, -1,
       real(1, 2), RRule::given, false, t1_note},
      {1, 2, real(-1), real(1, 2), kAp, kAp, "r*csc(sqrt(r)*xi)/(2*(1 - csc(sqrt(r)*xi)))", CaseId::II_csc, -1,
       real(1, 2), RRule::given, false, t1_note},
      {1, 3, real(1), real(-1, 2), kAp, kAp, "-r*csc(sqrt(r)*xi)/(2*(1 + csc(sqrt(r)*xi)))", CaseId::II_csc, 1,
       real(-1, 2), RRule::given, false, t1_note},
      {1, 4, real(1), real(-1, 2), "sqrt(lambda)/6", "sqrt(lambda)/6",
       "-sqrt(lambda)*csc((4*lambda)^(1/4)*xi)/(1 + csc((4*lambda)^(1/4)*xi))", CaseId::II_csc, 1, real(-1, 2),
       RRule::two_sqrt_lambda, false, t1_note},
      {2, 1, imag(-1), imag(-1, 2), kBm, kBm, "1/2*r*(1 + 1/(csc(sqrt(-r)*xi) - 1))", CaseId::II_csc, -1, real(1, 2),
       RRule::negated, false, t2_note},
      {2, 2, imag(-1), imag(-1, 2), kBp, kBp, "1/2*r*(1 + 1/(csc(sqrt(-r)*xi) - 1))", CaseId::II_csc, -1, real(1, 2),
       RRule::negated, false, t2_note},
      {2, 3, imag(1), imag(1, 2), kBp, kBp, "1/2*r*(1 - 1/(csc(sqrt(-r)*xi) + 1))", CaseId::II_csc, 1, real(-1, 2),
       RRule::negated, false, t2_note},
      {2, 4, imag(1), imag(1, 2), "-5*sqrt(lambda)/6 + sqrt(lambda)/6", "0",
       "sqrt(lambda)/(csc((4*lambda)^(1/4)*xi) + 1)", CaseId::II_csc, 1, real(-1, 2), RRule::two_sqrt_lambda, false,
       "printed u lacks the constant -5*sqrt(lambda)/6 of the Table 1 row 4 form; checked as printed"},
      {3, 1, real(-1), real(1, 2), kAm, kAm, "r*sec(sqrt(r)*xi)/(2*(1 - sec(sqrt(r)*xi)))", CaseId::II_sec, -1,
       real(1, 2), RRule::given, false, ""},
      {3, 2, real(-1), real(1, 2), kAp, kAp, "r*sec(sqrt(r)*xi)/(2*(1 - sec(sqrt(r)*xi)))", CaseId::II_sec, -1,
       real(1, 2), RRule::given, false, ""},
      {3, 3, real(1), real(-1, 2), kAm, kAm, "-r*sec(sqrt(r)*xi)/(2*(sec(sqrt(r)*xi) + 1))", CaseId::II_sec, 1,
       real(-1, 2), RRule::given, false, ""},
      {3, 4, real(1), real(-1, 2), kAp, kAp, "-r*sec(sqrt(r)*xi)/(2*(sec(sqrt(r)*xi) + 1))", CaseId::II_sec, 1,
       real(-1, 2), RRule::given, false, ""},
      {3, 5, real(-1), real(1, 2), "-sqrt(lambda)/6", "-sqrt(lambda)/6",
       "-1/2*sqrt(lambda)*csch((lambda/4)^(1/4)*xi)^2", CaseId::III, -1, real(-1, 2), RRule::two_sqrt_lambda, false,
       "csch(y)^2 = 2/(cosh(2y) - 1): the Case III form with e = -1, mu = -1, a1 = -1/2"},
      {3, 6, real(1), real(-1, 2), "-sqrt(lambda)/6", "-sqrt(lambda)/6",
       "sqrt(lambda)/(cosh((4*lambda)^(1/4)*xi) + 1)", CaseId::III, 1, real(1, 2), RRule::two_sqrt_lambda, true,
       "1/(cosh + 1) = sech/(1 + sech): the Case III form with e = -1"},
      {3, 7, real(-1), real(1, 2), "sqrt(lambda)/6", "sqrt(lambda)/6",
       "sqrt(lambda)*sec((4*lambda)^(1/4)*xi)/(1 - sec((4*lambda)^(1/4)*xi))", CaseId::II_sec, -1, real(1, 2),
       RRule::two_sqrt_lambda, false, ""},
      {4, 1, real(-1), real(-1, 2), kBm, kBm, "-r*sech(sqrt(r)*xi)/(2*(1 - sech(sqrt(r)*xi)))", CaseId::III, -1,
       real(-1, 2), RRule::given, false, ""},
      {4, 2, real(-1), real(-1, 2), kBp, kBp, "-r*sech(sqrt(r)*xi)/(2*(1 - sech(sqrt(r)*xi)))", CaseId::III, -1,
       real(-1, 2), RRule::given, false, ""},
      {4, 3, real(1), real(1, 2), kBm, kBm, "r*sech(sqrt(r)*xi)/(2*(sech(sqrt(r)*xi) + 1))", CaseId::III, 1,
       real(1, 2), RRule::given, true, ""},
      {4, 4, real(1), real(1, 2), kBp, kBp, "r*sech(sqrt(r)*xi)/(2*(sech(sqrt(r)*xi) + 1))", CaseId::III, 1,
       real(1, 2), RRule::given, true, ""},
      {4, 5, real(-1), real(-1, 2), "-sqrt(lambda)/6", "-sqrt(lambda)/6",
       "-sqrt(lambda)*sech((4*lambda)^(1/4)*xi)/(1 - sech((4*lambda)^(1/4)*xi))", CaseId::III, -1, real(-1, 2),
       RRule::two_sqrt_lambda, false, ""},
      {4, 6, real(1), real(1, 2), "-sqrt(lambda)/6", "-sqrt(lambda)/6",
       "sqrt(lambda)*sech((4*lambda)^(1/4)*xi)/(sech((4*lambda)^(1/4)*xi) + 1)", CaseId::III, 1, real(1, 2),
       RRule::two_sqrt_lambda, true, ""},
  };
}

std::vector<SolutionFamily> build_catalog() {
  std::vector<SolutionFamily> out;
  for (const RowSpec& s : row_specs()) {
    const TableHeader& h = kHeaders[s.table - 1];
    SolutionFamily f;
    f.id = "T" + std::to_string(s.table) + "R" + std::to_string(s.row);
    f.table = s.table;
    f.row = s.row;
    f.e_printed = h.e;
    f.rho_printed = h.rho;
    f.r_condition = h.r_condition;
    f.mu_printed = s.mu;
    f.a1_printed = s.a1;
    f.a0_printed = Formula::parse(s.a0);
    f.offset = Formula::parse(s.offset);
    f.shape = Formula::parse(s.shape);
    const auto [e, rho] = case_signs(s.eff_case);
    f.effective = {s.eff_case, e, rho, real(s.eff_mu), s.eff_a1, s.rule};
    if (s.rule == RRule::two_sqrt_lambda) {
      f.admissibility = {0, false, true};
    } else {
      f.admissibility = {s.rule == RRule::negated ? -1 : 1, true, false};
    }
    f.bounded = s.bounded;
    f.note = s.note;
    out.push_back(std::move(f));
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

const char* r_rule_name(RRule rule) {
  switch (rule) {
    case RRule::given: return "r";
    case RRule::negated: return "-r";
    case RRule::two_sqrt_lambda: return "2*sqrt(lambda)";
  }
  return "?";
}

std::string Admissibility::describe() const {
  std::vector<std::string> parts;
  if (r_sign > 0) parts.emplace_back("r > 0");
  if (r_sign < 0) parts.emplace_back("r < 0");
  if (needs_real_surd) parts.emplace_back("r^2 - 4*lambda >= 0");
  if (needs_positive_lambda) parts.emplace_back("lambda > 0");
  if (r_sign == 0) parts.emplace_back("r = +-2*sqrt(lambda) (derived)");
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
  return out;
}

const std::vector<SolutionFamily>& list_families() {
  static const std::vector<SolutionFamily> families = build_catalog();
  return families;
}

const SolutionFamily& find_family(const std::string& id) {
  for (const auto& f : list_families()) {
    if (f.id == id) return f;
  }
  throw std::out_of_range("unknown family '" + id + "'");
}

Instance instantiate(const SolutionFamily& f, double lambda, std::optional<double> r) {
  const auto fail = [&](const std::string& why) {
    throw DomainError(f.id + ": inadmissible (r, lambda): " + why + "; requires " + f.admissibility.describe());
  };
  if (!std::isfinite(lambda) || (r && !std::isfinite(*r))) fail("non-finite input");
  Instance inst;
  inst.lambda = lambda;
  const Admissibility& adm = f.admissibility;
  if (adm.needs_positive_lambda && !(lambda > 0)) fail("lambda = " + format_double(lambda));
  if (f.effective.r_rule == RRule::two_sqrt_lambda) {
    const double derived = (f.r_condition == "r<0" ? -2.0 : 2.0) * std::sqrt(lambda);
    if (r && std::fabs(*r - derived) > 1e-12 * std::max(1.0, std::fabs(derived))) {
      fail("r is fixed to " + format_double(derived) + " by lambda");
    }
    inst.r = derived;
    inst.r_eff = 2.0 * std::sqrt(lambda);
  } else {
    if (!r) fail("r is required");
    inst.r = *r;
    if (adm.r_sign > 0 && !(*r > 0)) fail("r = " + format_double(*r));
    if (adm.r_sign < 0 && !(*r < 0)) fail("r = " + format_double(*r));
    if (f.lambda_rule) inst.lambda = f.lambda_rule->evaluate<double>(0.0, *r, 0.0);
    if (adm.needs_real_surd && inst.r * inst.r - 4.0 * inst.lambda < 0) {
      fail("r^2 - 4*lambda = " + format_double(inst.r * inst.r - 4.0 * inst.lambda));
    }
    inst.r_eff = f.effective.r_rule == RRule::negated ? -inst.r : inst.r;
  }
  if (!std::isfinite(f.offset.evaluate<double>(0.0, inst.r, inst.lambda))) fail("a0 is not real");
  return inst;
}

ClosedForm::ClosedForm(Formula offset, Formula shape, double r, double lambda)
    : offset_(std::move(offset)), shape_(std::move(shape)), r_(r), lambda_(lambda), speed_(lambda) {}

ClosedForm ClosedForm::with_speed(double speed) const {
  ClosedForm c = *this;
  c.speed_ = speed;
  return c;
}

ClosedForm ClosedForm::with_shape_scale(double scale) const {
  ClosedForm c = *this;
  c.shape_scale_ = scale;
  return c;
}

double ClosedForm::operator()(double x, double t) const {
  const double xi = x + speed_ * t;
  return offset_.evaluate<double>(xi, r_, lambda_) + shape_scale_ * shape_.evaluate<double>(xi, r_, lambda_);
}

HighReal ClosedForm::evaluate_high(const HighReal& x, const HighReal& t) const {
  const HighReal xi = x + HighReal(speed_) * t;
  return offset_.evaluate<HighReal>(xi, r_, lambda_) +
         HighReal(shape_scale_) * shape_.evaluate<HighReal>(xi, r_, lambda_);
}

Jet ClosedForm::jet(double x, double t) const {
  // xi = (x + h) + speed (t + eps): Taylor variable h, dual part eps.
  SpaceTimeJet xi(Dual<double>(x + speed_ * t, speed_));
  xi.c[1] = Dual<double>(1.0);
  const SpaceTimeJet u = offset_.evaluate<SpaceTimeJet>(xi, r_, lambda_) +
                         SpaceTimeJet(shape_scale_) * shape_.evaluate<SpaceTimeJet>(xi, r_, lambda_);
  Jet j;
  j.value = u.c[0].v;
  for (std::size_t k = 1; k <= 5; ++k) j.dx[k - 1] = u.derivative(k).v;
  j.dt = u.c[0].d;
  return j;
}

PoleScan ClosedForm::pole_scan(double x, double t) const {
  const double xi = x + speed_ * t;
  PoleScan a = offset_.pole_scan(xi, r_, lambda_);
  const PoleScan b = shape_.pole_scan(xi, r_, lambda_);
  a.min_denominator = std::min(a.min_denominator, b.min_denominator);
  a.min_distance = std::min(a.min_distance, b.min_distance);
  return a;
}

std::string ClosedForm::to_string() const {
  std::string out = "u = " + offset_.to_string() + " + ";
  if (shape_scale_ != 1.0) out += format_double(shape_scale_) + "*";
  out += "(" + shape_.to_string() + "), xi = x + " + format_double(speed_) + "*t, r = " + format_double(r_) +
         ", lambda = " + format_double(lambda_);
  return out;
}

ClosedForm build_solution(const SolutionFamily& f, double lambda, std::optional<double> r) {
  const Instance inst = instantiate(f, lambda, r);
  return ClosedForm(f.offset, f.shape, inst.r, inst.lambda);
}

Jet taylor_eval(const ClosedForm& u, double x, double t) {
  if (!u.regular(x, t, kPoleMargin)) {
    throw DomainError("point (" + format_double(x) + ", " + format_double(t) + ") is within " +
                      format_double(kPoleMargin) + " of a pole");
  }
  return u.jet(x, t);
}

namespace {

Rational real_constant(const sym::ParamPoly& p, const char* what) {
  if (!p.is_zero() && !p.is_constant()) throw DomainError(std::string(what) + " is not a constant");
  const GaussianRational v = p.is_zero() ? GaussianRational() : p.constant_value();
  if (!v.is_real()) throw DomainError(std::string(what) + " is not real");
  return v.re();
}

Formula poly_formula(const sym::ParamPoly& p) {
  for (sym::Symbol s : p.symbols()) {
    if (s != sym::Symbol::r && s != sym::Symbol::lambda) {
      throw DomainError("branch value depends on free symbol " + std::string(sym::symbol_name(s)));
    }
  }
  for (const auto& [x, c] : p.terms()) {
    if (!c.is_real()) throw DomainError("branch value has a complex coefficient");
  }
  return Formula::parse(p.to_string());
}

Formula ratio_formula(const Rational& q) { return Formula::constant(q.get_num().get_si(), q.get_den().get_si()); }

}  // namespace

SolutionFamily family_from_branch(const gen::SolutionBranch& branch, std::size_t root_index) {
  using sym::Symbol;
  CaseId c = CaseId::III;
  if (branch.e_val == 1 && branch.rho_val == -1) {
    c = CaseId::II_sec;
  } else if (branch.e_val == -1 && branch.rho_val == -1) {
    c = CaseId::III;
  } else if (branch.e_val == -1 && branch.rho_val == 1) {
    c = CaseId::IV;
  } else {
    throw DomainError("e = 1, rho = 1 has no real Riccati case");
  }
  const auto value = [&](Symbol s) -> const sym::ParamPoly& {
    auto it = branch.assignments.find(s);
    if (it == branch.assignments.end()) throw DomainError(std::string(sym::symbol_name(s)) + " is not fixed");
    return it->second;
  };
  const Rational mu = real_constant(value(Symbol::mu), "mu");
  const Rational a1 = real_constant(value(Symbol::a1), "a1");
  if (sgn(a1) == 0) throw DomainError("constant branch has no Riccati shape");
  if (sgn(real_constant(value(Symbol::b1), "b1")) != 0) throw DomainError("b1 != 0 branches are not supported");

  SolutionFamily f;
  f.id = branch.id;
  f.e_printed = branch.e_val;
  f.rho_printed = branch.rho_val;
  f.mu_printed = GaussianRational(mu);
  f.a1_printed = GaussianRational(a1);
  auto a0 = branch.assignments.find(Symbol::a0);
  if (a0 != branch.assignments.end()) {
    f.offset = poly_formula(a0->second);
  } else {
    const gen::ResidualConstraint* con = nullptr;
    for (const auto& k : branch.constraints) {
      if (k.variable == Symbol::a0) con = &k;
    }
    if (con == nullptr) throw DomainError("a0 is free");
    const auto cf = con->poly.coefficients_in(Symbol::a0);
    if (cf.size() != 3) throw DomainError("a0 constraint is not quadratic");
    const Formula A = poly_formula(cf[2]), B = poly_formula(cf[1]), C = poly_formula(cf[0]);
    const std::string disc = "(" + B.to_string() + ")^2 - 4*(" + A.to_string() + ")*(" + C.to_string() + ")";
    const char* sign = root_index == 0 ? " - " : " + ";
    f.offset = Formula::parse("(-(" + B.to_string() + ")" + sign + "sqrt(" + disc + "))/(2*(" + A.to_string() + "))");
    f.id += root_index == 0 ? "_minus" : "_plus";
  }
  auto lam = branch.assignments.find(Symbol::lambda);
  if (lam != branch.assignments.end()) f.lambda_rule = poly_formula(lam->second);
  f.a0_printed = f.offset;
  f.shape = ratio_formula(a1) * Formula::parse(case_sigma_text(c, mu.get_num().get_si(), mu.get_den().get_si()));
  f.effective = {c, branch.e_val, branch.rho_val, GaussianRational(mu), GaussianRational(a1), RRule::given};
  f.admissibility = {1, false, false};
  f.bounded = c == CaseId::III && mu > -1;
  f.note = "solver branch";
  return f;
}

}  // namespace cdg::cat
