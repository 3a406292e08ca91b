#include "cdgkit/pdesim/pdesim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace cdg::sim {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not a number");
  }
  if (used != text.size()) throw ConfigError("config key '" + key + "': '" + text + "' is not a number");
  return v;
}

/// A number, "pi", or "<number>*pi".
double parse_length(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "pi") return std::numbers::pi;
  const auto star = t.find('*');
  if (star != std::string::npos && trim(t.substr(star + 1)) == "pi") {
    return parse_number(key, trim(t.substr(0, star))) * std::numbers::pi;
  }
  return parse_number(key, t);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config key '" + key + "': '" + text + "' is not a boolean");
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (!(v >= 0) || v != std::floor(v) || v > 1e9) throw ConfigError("config key '" + key + "' must be a count");
  return static_cast<std::size_t>(v);
}

void set_key(SimConfig& c, const std::string& key, const std::string& value) {
  if (key == "family") {
    c.family_id = value;
  } else if (key == "lambda") {
    c.lambda = parse_number(key, value);
  } else if (key == "r") {
    c.r = parse_number(key, value);
  } else if (key == "n_modes") {
    c.n_modes = parse_count(key, value);
  } else if (key == "L" || key == "domain_half_length") {
    c.half_length = parse_length(key, value);
  } else if (key == "dt") {
    c.dt = parse_number(key, value);
  } else if (key == "t_end") {
    c.t_end = parse_number(key, value);
  } else if (key == "dealias") {
    c.dealias = parse_bool(key, value);
  } else if (key == "scheme") {
    try {
      c.scheme = scheme_from_name(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "snapshot_every") {
    c.snapshot_every = parse_count(key, value);
  } else if (key == "snapshot_file") {
    c.snapshot_file = value;
  } else if (key == "order_check") {
    c.order_check = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) {
    std::ostringstream os;
    os << std::setprecision(17) << v.get<double>();
    return os.str();
  }
  throw ConfigError("config values must be scalars");
}

/// Refines a grid maximum of |u - background| to the interpolant's
/// stationary point by Newton iteration on u_x.
double locate_peak(const SpectralGrid& g, const std::vector<Complex>& c, const std::vector<double>& u,
                   double background) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < u.size(); ++j) {
    if (std::fabs(u[j] - background) > std::fabs(u[best] - background)) best = j;
  }
  double x = g.x()[best];
  const double dx = 2 * g.half_length() / static_cast<double>(g.size());
  for (int it = 0; it < 50; ++it) {
    const double d1 = g.interpolate(c, x, 1);
    const double d2 = g.interpolate(c, x, 2);
    if (d2 == 0) break;
    const double step = std::clamp(-d1 / d2, -dx, dx);
    x += step;
    if (std::fabs(step) < 1e-14) break;
  }
  return x;
}

bool all_finite(const std::vector<Complex>& c) {
  return std::all_of(c.begin(), c.end(), [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

struct Integration {
  std::vector<Complex> final_state;
  std::vector<Snapshot> snapshots;
};

Integration integrate(const SimConfig& c, const SpectralGrid& g, const std::vector<double>& u0, double dt,
                      std::size_t steps, bool keep_snapshots) {
  const Integrator stepper(g, ver::PdeCoefficients::from(c.pde), dt, c.scheme, c.dealias);
  Integration out;
  std::vector<Complex> state = g.transform(u0);
  state.back() = 0;  // Nyquist
  if (keep_snapshots) out.snapshots.push_back({0.0, g.inverse(state)});
  std::vector<Complex> last_good;
  for (std::size_t s = 1; s <= steps; ++s) {
    last_good = state;
    stepper.advance(state);
    if (!all_finite(state)) {
      throw BlowUp("non-finite state at step " + std::to_string(s), static_cast<double>(s - 1) * dt,
                   g.inverse(last_good));
    }
    const bool last = s == steps;
    if (keep_snapshots && !last && c.snapshot_every != 0 && s % c.snapshot_every == 0) {
      out.snapshots.push_back({static_cast<double>(s) * dt, g.inverse(state)});
    }
  }
  if (keep_snapshots) out.snapshots.push_back({static_cast<double>(steps) * dt, g.inverse(state)});
  out.final_state = std::move(state);
  return out;
}

}  // namespace

struct Fft::Impl {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

Fft::Fft(std::size_t n) : n_(n), impl_(std::make_unique<Impl>()) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("FFT size must be even and at least 2");
  impl_->real = fftw_alloc_real(n);
  impl_->spec = fftw_alloc_complex(n / 2 + 1);
  std::lock_guard<std::mutex> lock(planner_mutex());
  const int ni = static_cast<int>(n);
  impl_->fwd = fftw_plan_dft_r2c_1d(ni, impl_->real, impl_->spec, FFTW_ESTIMATE);
  impl_->inv = fftw_plan_dft_c2r_1d(ni, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(impl_->fwd);
  fftw_destroy_plan(impl_->inv);
  fftw_free(impl_->real);
  fftw_free(impl_->spec);
}

void Fft::forward(const std::vector<double>& in, std::vector<Complex>& out) {
  if (in.size() != n_) throw std::invalid_argument("FFT input size mismatch");
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->fwd);
  out.resize(n_ / 2 + 1);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = Complex(impl_->spec[j][0], impl_->spec[j][1]);
}

void Fft::inverse(const std::vector<Complex>& in, std::vector<double>& out) {
  if (in.size() != n_ / 2 + 1) throw std::invalid_argument("FFT input size mismatch");
  for (std::size_t j = 0; j < in.size(); ++j) {
    impl_->spec[j][0] = in[j].real();
    impl_->spec[j][1] = in[j].imag();
  }
  fftw_execute(impl_->inv);  // c2r overwrites spec, which is scratch here
  out.resize(n_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = impl_->real[j] * scale;
}

SpectralGrid::SpectralGrid(std::size_t n, double half_length)
    : n_(n), L_(half_length), fft_(std::make_shared<Fft>(n)) {
  if (!(half_length > 0)) throw std::invalid_argument("domain half length must be positive");
  x_.resize(n);
  for (std::size_t j = 0; j < n; ++j) x_[j] = -L_ + 2 * L_ * static_cast<double>(j) / static_cast<double>(n);
  k_.resize(n / 2 + 1);
  for (std::size_t j = 0; j < k_.size(); ++j) k_[j] = std::numbers::pi * static_cast<double>(j) / L_;
}

std::vector<Complex> SpectralGrid::transform(const std::vector<double>& u) const {
  std::vector<Complex> c;
  fft_->forward(u, c);
  return c;
}

std::vector<double> SpectralGrid::inverse(const std::vector<Complex>& c) const {
  std::vector<double> u;
  fft_->inverse(c, u);
  return u;
}

std::vector<double> SpectralGrid::derivative(const std::vector<double>& u, unsigned order) const {
  std::vector<Complex> c = transform(u);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] *= std::pow(Complex(0, k_[j]), static_cast<int>(order));
  c.back() = 0;
  return inverse(c);
}

double SpectralGrid::interpolate(const std::vector<Complex>& c, double x, unsigned order) const {
  double sum = 0;
  for (std::size_t j = 0; j + 1 < c.size(); ++j) {
    const Complex factor = std::pow(Complex(0, k_[j]), static_cast<int>(order));
    const Complex phase = std::polar(1.0, k_[j] * (x + L_));
    sum += (j == 0 ? 1.0 : 2.0) * (c[j] * factor * phase).real();
  }
  return sum / static_cast<double>(n_);
}

const char* scheme_name(Scheme s) { return s == Scheme::etdrk4 ? "etdrk4" : "ifrk4"; }

Scheme scheme_from_name(const std::string& name) {
  if (name == "etdrk4") return Scheme::etdrk4;
  if (name == "ifrk4") return Scheme::ifrk4;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected etdrk4 or ifrk4)");
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

double SimConfig::stiffness() const {
  return dt * std::pow(std::numbers::pi * static_cast<double>(n_modes) / (2 * half_length), 5);
}

void SimConfig::validate() const {
  if (n_modes < 64 || !is_power_of_two(n_modes)) throw ConfigError("n_modes must be a power of two >= 64");
  if (!(half_length > 0) || !std::isfinite(half_length)) throw ConfigError("L must be positive");
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw ConfigError("t_end must be positive");
  if (std::fabs(static_cast<double>(steps()) * dt - t_end) > 1e-9 * t_end) {
    throw ConfigError("t_end must be a whole number of steps");
  }
  if (stiffness() > kStiffnessBudget) {
    throw ConfigError("dt (pi n / 2L)^5 = " + std::to_string(stiffness()) + " exceeds the stiffness budget " +
                      std::to_string(kStiffnessBudget));
  }
  pde.validate();
  const cat::SolutionFamily& f = cat::find_family(family_id);
  if (!f.bounded) {
    throw DomainError(family_id + " has poles on the real line; simulation requires a bounded family");
  }
  cat::instantiate(f, lambda, r);
}

SimConfig parse_config(const std::string& text) {
  SimConfig c;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    for (const auto& [key, value] : j.items()) set_key(c, key, json_scalar(value));
    return c;
  }
  std::istringstream in(text);
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    set_key(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Integrator::Integrator(const SpectralGrid& grid, const ver::PdeCoefficients& p, double dt, Scheme scheme, bool dealias)
    : grid_(grid), p_(p), dt_(dt), scheme_(scheme) {
  const std::size_t m = grid.wavenumbers().size();
  const double kmax = grid.k(m - 1);
  mask_.assign(m, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (j + 1 == m || (dealias && grid.k(j) > 2.0 / 3.0 * kmax)) mask_[j] = 0.0;
  }
  e_full_.resize(m);
  e_half_.resize(m);
  std::vector<Complex> lin(m);
  for (std::size_t j = 0; j < m; ++j) {
    // -omega (i k)^5 = -i omega k^5
    lin[j] = Complex(0, -p.omega * std::pow(grid.k(j), 5));
    e_full_[j] = std::exp(dt * lin[j]);
    e_half_[j] = std::exp(dt * lin[j] / 2.0);
  }
  if (scheme != Scheme::etdrk4) return;
  // Cox-Matthews coefficients by contour averaging over M points on the
  // full unit circle around each h L; the half-spectrum L is imaginary, so
  // the conjugate-symmetric half circle would not suffice.
  constexpr int M = 32;
  q_.resize(m);
  f1_.resize(m);
  f2_.resize(m);
  f3_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    Complex q = 0, a = 0, b = 0, c = 0;
    for (int i = 1; i <= M; ++i) {
      const Complex z = dt * lin[j] + std::polar(1.0, 2 * std::numbers::pi * (i - 0.5) / M);
      const Complex ez = std::exp(z), z3 = z * z * z;
      q += (std::exp(z / 2.0) - 1.0) / z;
      a += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
      b += (2.0 + z + ez * (-2.0 + z)) / z3;
      c += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
    }
    q_[j] = dt * q / double(M);
    f1_[j] = dt * a / double(M);
    f2_[j] = dt * b / double(M);
    f3_[j] = dt * c / double(M);
  }
}

std::vector<Complex> Integrator::nonlinear(const std::vector<Complex>& c) const {
  const std::size_t m = c.size();
  std::vector<Complex> v(m), d1(m), d2(m), d3(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Complex cm = c[j] * mask_[j];
    const Complex ik(0, grid_.k(j));
    v[j] = cm;
    d1[j] = ik * cm;
    d2[j] = ik * ik * cm;
    d3[j] = ik * ik * ik * cm;
  }
  const auto u = grid_.inverse(v), u1 = grid_.inverse(d1), u2 = grid_.inverse(d2), u3 = grid_.inverse(d3);
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = p_.alpha * u[i] * u3[i] + p_.beta * u1[i] * u2[i] + p_.gamma * u[i] * u[i] * u1[i];
  }
  std::vector<Complex> out = grid_.transform(w);
  for (auto& z : out) z = -z;
  out.back() = 0;
  return out;
}

void Integrator::advance(std::vector<Complex>& v) const {
  const std::size_t m = v.size();
  if (scheme_ == Scheme::etdrk4) {
    const auto nv = nonlinear(v);
    std::vector<Complex> a(m), b(m), c(m);
    for (std::size_t j = 0; j < m; ++j) a[j] = e_half_[j] * v[j] + q_[j] * nv[j];
    const auto na = nonlinear(a);
    for (std::size_t j = 0; j < m; ++j) b[j] = e_half_[j] * v[j] + q_[j] * na[j];
    const auto nb = nonlinear(b);
    for (std::size_t j = 0; j < m; ++j) c[j] = e_half_[j] * a[j] + q_[j] * (2.0 * nb[j] - nv[j]);
    const auto nc = nonlinear(c);
    for (std::size_t j = 0; j < m; ++j) {
      v[j] = e_full_[j] * v[j] + nv[j] * f1_[j] + 2.0 * (na[j] + nb[j]) * f2_[j] + nc[j] * f3_[j];
    }
    return;
  }
  // Lawson integrating-factor RK4.
  const double h = dt_;
  std::vector<Complex> s(m);
  const auto a = nonlinear(v);
  for (std::size_t j = 0; j < m; ++j) s[j] = e_half_[j] * (v[j] + h / 2 * a[j]);
  const auto b = nonlinear(s);
  for (std::size_t j = 0; j < m; ++j) s[j] = e_half_[j] * v[j] + h / 2 * b[j];
  const auto c = nonlinear(s);
  for (std::size_t j = 0; j < m; ++j) s[j] = e_full_[j] * v[j] + h * e_half_[j] * c[j];
  const auto d = nonlinear(s);
  for (std::size_t j = 0; j < m; ++j) {
    v[j] = e_full_[j] * v[j] + h / 6 * (e_full_[j] * a[j] + 2.0 * e_half_[j] * (b[j] + c[j]) + d[j]);
  }
}

SimState Integrator::step(const SimState& s) const {
  std::vector<Complex> c = grid_.transform(s.u);
  c.back() = 0;
  advance(c);
  if (!all_finite(c)) throw BlowUp("non-finite state", s.t, s.u);
  return {s.t + dt_, grid_.inverse(c)};
}

SimMetrics run(const SimConfig& c) {
  c.validate();
  const cat::SolutionFamily& f = cat::find_family(c.family_id);
  const cat::Instance inst = cat::instantiate(f, c.lambda, c.r);
  const cat::ClosedForm exact(f.offset, f.shape, inst.r, inst.lambda);
  const double background = f.offset.evaluate<double>(0.0, inst.r, inst.lambda);
  const SpectralGrid g(c.n_modes, c.half_length);
  const std::size_t steps = c.steps();
  const double t_end = static_cast<double>(steps) * c.dt;

  SimMetrics m;
  m.steps = steps;
  m.x = g.x();
  for (double t : {0.0, t_end}) {
    for (double x : {-c.half_length, c.half_length}) {
      m.boundary_decay = std::max(m.boundary_decay, std::fabs(exact(x, t) - background));
    }
  }
  if (!(m.boundary_decay < 1e-10)) {
    throw DomainError("profile does not decay to its background at the boundary (" +
                      std::to_string(m.boundary_decay) + "); enlarge L");
  }
  std::vector<double> u0(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) u0[j] = exact(g.x()[j], 0.0);

  Integration run1 = integrate(c, g, u0, c.dt, steps, true);
  const std::vector<double>& u_final = run1.snapshots.back().u;
  m.exact_final.resize(g.size());
  double sq = 0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    m.exact_final[j] = exact(g.x()[j], t_end);
    const double err = std::fabs(u_final[j] - m.exact_final[j]);
    m.linf_error = std::max(m.linf_error, err);
    sq += err * err;
  }
  m.l2_error = std::sqrt(sq / static_cast<double>(g.size()));

  std::vector<Complex> c0 = g.transform(u0);
  c0.back() = 0;
  const double n = static_cast<double>(g.size());
  m.mean_drift = std::fabs(run1.final_state[0].real() - c0[0].real()) / n;

  const double x0 = locate_peak(g, c0, u0, background);
  const double x1 = locate_peak(g, run1.final_state, u_final, background);
  double shift = x1 - x0;
  const double period = 2 * c.half_length;
  shift -= period * std::round(shift / period);
  m.peak_speed = shift / t_end;
  m.expected_speed = -inst.lambda;
  m.speed_rel_error = std::fabs(m.peak_speed - m.expected_speed) / std::fabs(m.expected_speed);

  if (c.order_check) {
    const Integration run2 = integrate(c, g, u0, c.dt / 2, 2 * steps, false);
    const std::vector<double> u2 = g.inverse(run2.final_state);
    double e2 = 0;
    for (std::size_t j = 0; j < g.size(); ++j) e2 = std::max(e2, std::fabs(u2[j] - m.exact_final[j]));
    m.linf_error_half_dt = e2;
    m.order_ratio = m.linf_error / e2;
  }
  m.snapshots = std::move(run1.snapshots);
  return m;
}

std::string snapshot_text(const SimMetrics& m, const cat::ClosedForm& exact) {
  std::ostringstream os;
  os << std::setprecision(17) << "t\tx\tu_numeric\tu_exact\terror\n";
  for (const auto& s : m.snapshots) {
    for (std::size_t j = 0; j < m.x.size(); ++j) {
      const double ue = exact(m.x[j], s.t);
      os << s.t << '\t' << m.x[j] << '\t' << s.u[j] << '\t' << ue << '\t' << s.u[j] - ue << '\n';
    }
  }
  return os.str();
}

}  // namespace cdg::sim
