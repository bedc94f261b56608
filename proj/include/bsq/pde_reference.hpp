#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsq/initial_data.hpp"
#include "bsq/sector4_asymptotics.hpp"

namespace bsq {

// Traveling wave U(x - x0 - v t) with U = a sech^2(beta x), a = 1.5 (v^2 - 1), beta = sqrt(v^2 - 1) / 2.
struct SolitonShape {
  double v = 0, a = 0, beta = 0;
  double U(double x) const;
  double Ux(double x) const;
};
SolitonShape soliton_shape(double v);
InitialData soliton_profile(double v, double x0 = 0.0, double L = 200.0);

struct FieldSnapshot {
  double t = 0;
  double L = 0;  // periodic domain [-L, L)
  std::vector<double> x, u, ut, w;
  double dx() const { return 2.0 * L / static_cast<double>(x.size()); }
  double mass() const;
};

struct EvolveOptions {
  double L = 700.0;
  int n = 2800;          // grid points
  double dt = 0.05;
  double cutoff = 0.9;   // hard filter |xi| > cutoff
  bool dealias = true;   // 2/3 rule on the quadratic term
};

class InstabilityError : public std::runtime_error {
 public:
  InstabilityError(const std::string& msg, double t, std::vector<double> spectrum)
      : std::runtime_error(msg), t_(t), spectrum_(std::move(spectrum)) {}
  double time() const { return t_; }
  const std::vector<double>& spectrum() const { return spectrum_; }

 private:
  double t_;
  std::vector<double> spectrum_;
};

// Filtered Fourier evolution of u_t = w_x, w_t = (u + u^2 + u_xx)_x on a periodic grid.
class BoussinesqEvolver {
 public:
  explicit BoussinesqEvolver(EvolveOptions opt = {});

  FieldSnapshot initial(const InitialData& data) const;
  // Advance by T (negative T runs backward). Output snapshots at each time in `stops` (ascending in |t|).
  std::vector<FieldSnapshot> run(const FieldSnapshot& s0, const std::vector<double>& stops) const;
  FieldSnapshot evolve(const FieldSnapshot& s0, double T) const { return run(s0, {s0.t + T}).front(); }

  // Exact evolution of the linearized equation over the filtered band.
  FieldSnapshot linear_evolve(const FieldSnapshot& s0, double T) const;
  // Zero modes above the cutoff.
  void filter(std::vector<std::complex<double>>& uh) const;
  const std::vector<double>& wavenumbers() const { return xi_; }
  std::vector<std::complex<double>> spectrum(const std::vector<double>& f) const;
  const EvolveOptions& options() const { return opt_; }

 private:
  EvolveOptions opt_;
  std::vector<double> xi_;
  std::vector<char> keep_, dealias_;
};

FieldSnapshot evolve(const InitialData& data, double T, EvolveOptions opt = {});

struct ComparePoint {
  double x = 0, zeta = 0, u_pde = 0, u_asym = 0;
};

struct CompareReport {
  double t = 0;
  std::vector<ComparePoint> points;
  double max_err = 0, rms_err = 0;
  double max_u_pde = 0, max_u_asym = 0;
};

// Pointwise comparison over the zeta window at the snapshot time.
CompareReport compare(const AsymptoticModel& model, const FieldSnapshot& snap, int jobs = 1, int stride = 1);
// Same comparison from precomputed asymptotic values on a uniform x grid.
CompareReport compare_values(const std::vector<ComparePoint>& asym, const FieldSnapshot& snap);

// Least-squares slope of log y against log t.
double fit_exponent(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace bsq
