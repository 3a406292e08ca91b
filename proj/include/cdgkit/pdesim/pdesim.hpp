#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdgkit/catalog/catalog.hpp"
#include "cdgkit/verify/verify.hpp"

namespace cdg::sim {

using Complex = std::complex<double>;

/// Real-to-complex FFT pair of a fixed size; plans are created once under a
/// global lock (the FFTW planner is not thread-safe).
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  /// n/2 + 1 unnormalized coefficients.
  void forward(const std::vector<double>& in, std::vector<Complex>& out);
  /// Inverse including the 1/n normalization.
  void inverse(const std::vector<Complex>& in, std::vector<double>& out);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

/// Periodic grid x_j = -L + 2L j/n with spectral differentiation.
class SpectralGrid {
 public:
  SpectralGrid(std::size_t n, double half_length);

  std::size_t size() const { return n_; }
  double half_length() const { return L_; }
  const std::vector<double>& x() const { return x_; }
  /// Wavenumber of coefficient j = 0..n/2.
  double k(std::size_t j) const { return k_[j]; }
  const std::vector<double>& wavenumbers() const { return k_; }

  std::vector<Complex> transform(const std::vector<double>& u) const;
  std::vector<double> inverse(const std::vector<Complex>& c) const;
  /// d^order u/dx^order; the Nyquist mode is dropped.
  std::vector<double> derivative(const std::vector<double>& u, unsigned order) const;
  /// Fourier interpolant of coefficients c (d^order/dx^order) at any x.
  double interpolate(const std::vector<Complex>& c, double x, unsigned order = 0) const;

 private:
  std::size_t n_;
  double L_;
  std::vector<double> x_;
  std::vector<double> k_;
  std::shared_ptr<Fft> fft_;
};

enum class Scheme { etdrk4, ifrk4 };
const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Invalid configuration text or values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite values during integration.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(const std::string& what, double t, std::vector<double> last_good)
      : std::runtime_error(what), t_(t), last_good_(std::move(last_good)) {}
  double time() const { return t_; }
  const std::vector<double>& last_good() const { return last_good_; }

 private:
  double t_;
  std::vector<double> last_good_;
};

/// Largest accepted dt (pi n / (2 L))^5: the linear phase per step at the
/// grid's top wavenumber.
inline constexpr double kStiffnessBudget = 1e4;

struct SimConfig {
  std::string family_id = "T3R6";
  double lambda = 0.25;
  std::optional<double> r;
  std::size_t n_modes = 512;
  double half_length = 20 * 3.14159265358979323846;
  double dt = 1e-3;
  double t_end = 1.0;
  bool dealias = true;
  Scheme scheme = Scheme::etdrk4;
  /// Steps between snapshots; 0 keeps only the initial and final states.
  std::size_t snapshot_every = 0;
  /// Snapshot text destination; empty writes none.
  std::string snapshot_file;
  /// Also run at dt/2 and report the error ratio.
  bool order_check = true;
  red::KdV5Params pde = red::KdV5Params::cdg();

  std::size_t steps() const;
  double stiffness() const;
  /// Throws ConfigError for malformed values and DomainError (via the
  /// catalog) for inadmissible families or instances.
  void validate() const;
};

/// "key = value" lines ('#' comments) or a JSON object. Keys: family,
/// lambda, r, n_modes, L (a number or "<c>*pi"), dt, t_end, dealias, scheme,
/// snapshot_every, snapshot_file, order_check.
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::string& path);

struct SimState {
  double t = 0;
  std::vector<double> u;
};

/// Fixed-step integrator for u_t = -omega u5 - N(u) on a periodic grid. The
/// linear part is integrated exactly in Fourier space; N is the sum of the
/// three pointwise products, formed from spectral derivatives of the
/// (optionally 2/3-truncated) state.
class Integrator {
 public:
  Integrator(const SpectralGrid& grid, const ver::PdeCoefficients& p, double dt, Scheme scheme, bool dealias);

  const SpectralGrid& grid() const { return grid_; }
  double dt() const { return dt_; }

  /// One step. Throws BlowUp carrying the input state when the result is
  /// not finite.
  SimState step(const SimState& s) const;
  /// Fourier-space state update, for repeated stepping without transforms.
  void advance(std::vector<Complex>& c) const;
  /// Nonlinear right-hand side -FFT(alpha u u3 + beta u1 u2 + gamma u^2 u1).
  std::vector<Complex> nonlinear(const std::vector<Complex>& c) const;

 private:
  SpectralGrid grid_;
  ver::PdeCoefficients p_;
  double dt_;
  Scheme scheme_;
  std::vector<double> mask_;
  std::vector<Complex> e_full_, e_half_;
  // ETDRK4 coefficients.
  std::vector<Complex> q_, f1_, f2_, f3_;
};

struct Snapshot {
  double t = 0;
  std::vector<double> u;
};

struct SimMetrics {
  double linf_error = 0;
  double l2_error = 0;  // root mean square over the grid
  double peak_speed = 0;
  double expected_speed = 0;
  double speed_rel_error = 0;
  std::optional<double> order_ratio;
  std::optional<double> linf_error_half_dt;
  double mean_drift = 0;
  double boundary_decay = 0;  // max |u - background| at x = +-L
  std::size_t steps = 0;
  std::vector<double> x;
  std::vector<Snapshot> snapshots;
  std::vector<double> exact_final;
};

/// Integrates the family's closed form from t = 0 to t_end and compares with
/// the exact translated solution. Throws DomainError when the profile does
/// not decay to its background within 1e-10 at the boundary.
SimMetrics run(const SimConfig& c);

/// Tab-separated "t x u_numeric u_exact error" rows for every snapshot.
std::string snapshot_text(const SimMetrics& m, const cat::ClosedForm& exact);

}  // namespace cdg::sim
