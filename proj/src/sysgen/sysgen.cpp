#include "cdgkit/sysgen/sysgen.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "cdgkit/errors.hpp"
#include "cdgkit/symkernel/parse.hpp"

#ifndef CDGKIT_DATA_DIR
#define CDGKIT_DATA_DIR "data"
#endif

namespace cdg::gen {

std::string DegreeExpr::to_string() const {
  std::string out;
  if (sgn(m_coeff) != 0) {
    out = m_coeff == 1 ? "m" : m_coeff == -1 ? "-m" : sym::to_string(m_coeff) + "m";
  }
  if (sgn(constant) != 0 || out.empty()) {
    const std::string c = sym::to_string(abs(constant));
    if (out.empty()) {
      out = sym::to_string(constant);
    } else {
      out += (sgn(constant) < 0 ? "-" : "+") + c;
    }
  }
  return out;
}

BalanceReport balance_degrees(const DiffPoly& ode) {
  BalanceReport report;
  const std::pair<const char*, Rational> weightings[] = {{"generic", Rational(1)},
                                                         {"degenerate (mu^2+rho=0)", Rational(1, 2)}};
  for (const auto& [name, weight] : weightings) {
    WeightingReport w;
    w.name = name;
    w.tau_weight = weight;
    for (const auto& term : ode.terms()) {
      unsigned order_sum = 0;
      for (unsigned k : term.orders) order_sum += k;
      DegreeExpr d{Rational(static_cast<long>(term.orders.size())), weight * order_sum};
      const std::string source = red::render_factors(term);
      auto it = std::find_if(w.degrees.begin(), w.degrees.end(), [&](const LeadingDegree& l) { return l.degree == d; });
      if (it == w.degrees.end()) {
        w.degrees.push_back({d, {source}});
      } else {
        it->sources.push_back(source);
      }
    }
    std::sort(w.degrees.begin(), w.degrees.end(), [](const LeadingDegree& a, const LeadingDegree& b) {
      if (a.degree.m_coeff != b.degree.m_coeff) return a.degree.m_coeff > b.degree.m_coeff;
      return a.degree.constant > b.degree.constant;
    });
    for (unsigned m = 1; m <= kMaxBalancedOrder; ++m) {
      Rational best = w.degrees.front().degree.at(m);
      for (const auto& l : w.degrees) best = std::max(best, l.degree.at(m));
      const auto ties = std::count_if(w.degrees.begin(), w.degrees.end(),
                                      [&](const LeadingDegree& l) { return l.degree.at(m) == best; });
      if (ties >= 2) {
        w.admitted.push_back(m);
        report.admissible_m.insert(m);
      }
    }
    report.weightings.push_back(std::move(w));
  }
  return report;
}

AlgebraicSystem generate_system(const DiffPoly& ode, unsigned m, red::DerivativeRoute route) {
  if (m < 1) throw std::invalid_argument("ansatz order must be at least 1");
  const sym::SigmaTauExpr expr = red::substitute_ansatz(ode, red::Ansatz::symbolic(m), route);
  AlgebraicSystem system;
  system.r_clearing_power = expr.r_denom_power();
  for (auto& g : expr.collect()) {
    system.equations.push_back(std::move(g.coefficient));
    system.provenance.emplace_back(g.sigma_power, g.tau_power);
  }
  return system;
}

std::string system_to_latex(const AlgebraicSystem& system) {
  std::ostringstream out;
  for (std::size_t i = 0; i < system.size(); ++i) {
    out << "\\textbf{" << i + 1 << ".}\\quad " << system.equations[i].to_latex() << " = 0"
        << "\\qquad [\\sigma^{" << system.provenance[i].first << "}\\tau^{" << system.provenance[i].second
        << "}] \\\\\n";
  }
  return out.str();
}

ReferenceSystem parse_reference_system(const std::string& text) {
  ReferenceSystem ref;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected '<n>: <poly>'", 0);
    try {
      ref.numbers.push_back(std::stoi(line.substr(0, colon)));
      ref.equations.push_back(sym::parse_param_poly(line.substr(colon + 1)));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what(), colon + 1 + e.position());
    } catch (const std::logic_error&) {
      throw ParseError("line " + std::to_string(line_no) + ": bad equation number", 0);
    }
  }
  return ref;
}

ReferenceSystem load_reference_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reference system " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_reference_system(buf.str());
}

std::filesystem::path default_reference_path() {
  const char* env = std::getenv("CDGKIT_DATA_DIR");
  const std::filesystem::path dir = env != nullptr ? env : CDGKIT_DATA_DIR;
  return dir / "cdg_m1_reference_system.txt";
}

bool MatchReport::all_matched() const {
  return std::all_of(entries.begin(), entries.end(), [](const MatchEntry& e) { return e.matched; });
}

namespace {

struct Stripped {
  ParamPoly poly;
  unsigned r_power;
  unsigned e_power;
};

Stripped strip_r_e(const ParamPoly& p) {
  const unsigned kr = p.content_power(Symbol::r);
  ParamPoly q = p.divide_by_power(Symbol::r, kr);
  const unsigned ke = q.content_power(Symbol::e);
  return {q.divide_by_power(Symbol::e, ke), kr, ke};
}

// Returns the common ratio g(p)/f(p) over all points, if one exists.
std::optional<GaussianRational> proportionality(const ParamPoly& g, const ParamPoly& f,
                                                const std::vector<std::array<GaussianRational, sym::kSymbolCount>>& pts) {
  std::optional<GaussianRational> ratio;
  for (const auto& p : pts) {
    const GaussianRational gv = g.evaluate(p);
    const GaussianRational fv = f.evaluate(p);
    if (fv.is_zero()) {
      if (!gv.is_zero()) return std::nullopt;
      continue;
    }
    const GaussianRational q = gv / fv;
    if (q.is_zero()) return std::nullopt;
    if (ratio && !(*ratio == q)) return std::nullopt;
    ratio = q;
  }
  return ratio;
}

}  // namespace

MatchReport check_structural_match(const AlgebraicSystem& generated, const ReferenceSystem& reference,
                                   unsigned points, std::uint64_t seed) {
  MatchReport report;
  report.generated_count = generated.size();
  report.points = points;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 17);
  std::vector<std::array<GaussianRational, sym::kSymbolCount>> pts(points);
  for (auto& p : pts) {
    for (auto& v : p) {
      long n = 0;
      while (n == 0) n = num(rng);
      v = GaussianRational(sym::make_rational(n, den(rng)));
    }
  }
  std::vector<Stripped> gen;
  for (const auto& g : generated.equations) gen.push_back(strip_r_e(g));
  for (std::size_t i = 0; i < reference.equations.size(); ++i) {
    MatchEntry entry;
    entry.reference_number = reference.numbers[i];
    const Stripped ref = strip_r_e(reference.equations[i]);
    for (std::size_t j = 0; j < gen.size() && !entry.matched; ++j) {
      if (auto ratio = proportionality(gen[j].poly, ref.poly, pts)) {
        entry.matched = true;
        entry.generated_index = j;
        entry.group = generated.provenance[j];
        entry.factor = *ratio;
        entry.r_power = static_cast<int>(gen[j].r_power) - static_cast<int>(ref.r_power);
        entry.e_power = static_cast<int>(gen[j].e_power) - static_cast<int>(ref.e_power);
      }
    }
    report.entries.push_back(entry);
  }
  return report;
}

HighReal relative_residual(const ParamPoly& equation, const HighAssignment& values) {
  HighComplex sum(0);
  HighReal scale(0);
  for (const auto& [x, c] : equation.terms()) {
    HighComplex term = sym::coefficient_as<HighComplex>(c);
    for (std::size_t i = 0; i < sym::kSymbolCount; ++i) {
      for (unsigned k = 0; k < x[i]; ++k) term *= values[i];
    }
    sum += term;
    scale += abs(term);
  }
  if (scale == 0) return HighReal(0);
  return abs(sum) / scale;
}

}  // namespace cdg::gen
