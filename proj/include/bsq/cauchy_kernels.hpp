#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bsq/direct_scattering.hpp"
#include "bsq/spectral_core.hpp"

namespace bsq {

// Change of arg(k - s) as s runs counterclockwise along the unit circle from p to q
// (arc shorter than pi).
double arc_sweep(cplx k, cplx p, cplx q);
// k strictly inside the disk and strictly between the chord pq and the arc from p to q.
bool in_cap(cplx k, cplx p, cplx q);

// ln_s(k - s): cut along the arc from i to s and the ray (i, i inf); arg equals 2 pi at k - s = 1.
cplx ln_branch(cplx k, cplx s);
// Tilde branch: cut along the arc from s to -1 and (-inf, 0); arg equals 0 at k - s = 1.
cplx ln_tilde_branch(cplx k, cplx s);

enum class Side { Plus, Minus };

struct KernelOptions {
  int gauss = 16;
  int base_panels = 6;
  double split_ratio = 2.0;   // panel length allowed per unit distance to the nearest singularity
  double floor = 1e-12;       // smallest graded panel (radians)
  double model_eta = 1e-6;    // endpoint log model for ln f below this distance to omega
  double arc_tol = 1e-6;      // k closer than this to an arc needs an explicit side
};

struct NuBundle {
  double zeta = 0;
  double nu1 = 0, nu2 = 0, nu3 = 0, nu4 = 0, nu5 = 0;
  double nuhat1 = 0, nuhat2 = 0;
  // nu_2(k_2) + nu_3(k_2) - nu_4(k_2) with the pointwise nu_3 definition.
  double nuhat2_pointwise = 0;
};

// Endpoint model F(d) = m ln d + g0 + g1 d for the log density at distance d from omega.
struct EndpointModel {
  bool active = false;
  double m = 0, g0 = 0, g1 = 0;
};

// Cauchy-type functions of the sector: delta_1..delta_5, chi, chi~ and the nu exponents.
class SectorKernels {
 public:
  SectorKernels(const CircleReflection& refl, double zeta, KernelOptions opt = {});
  SectorKernels(CircleReflection&&, double, KernelOptions = {}) = delete;

  struct Arc {
    double a, b;        // counterclockwise angles
    int density;        // 0: ln(1 + r1 r2)(s), 1: ln f(s), 2: ln f(omega^2 s)
    double sign;        // prefactor sign of 1/(2 pi i)
    bool singular_end;  // density has a log singularity at b
  };

  double zeta() const { return zeta_; }
  const SaddleSet& saddles() const { return saddles_; }
  cplx wk4() const { return wk4_; }
  cplx w2k2() const { return w2k2_; }
  double theta_wk4() const { return th4_; }
  double theta_w2k2() const { return th2_; }
  const Arc& arc(int j) const { return arcs_.at(j - 1); }
  const EndpointModel& endpoint_model(int j) const { return models_.at(j - 1); }

  // Density F_j(theta) and its theta-derivative.
  double density(int j, double theta) const;
  double density_deriv(int j, double theta) const;
  // Raw density without the endpoint model.
  double density_raw(int j, double theta) const;

  cplx log_delta(int j, cplx k) const;
  cplx delta(int j, cplx k) const { return std::exp(log_delta(j, k)); }
  // Boundary value on the arc; Plus is the left side of the jump orientation.
  cplx log_delta_side(int j, double theta, Side side) const;
  cplx delta_side(int j, double theta, Side side) const { return std::exp(log_delta_side(j, theta, side)); }

  // chi_j (tilde = false) or chi~_j (tilde = true); j = 4, 5 are the regularized integrals.
  cplx chi(int j, cplx k, bool tilde) const;
  // Endpoint term of chi_1 at k = i, F(i) L(k, i) / (2 pi i); zero when r1(i) r2(i) = 0.
  cplx chi1_edge(cplx k, bool tilde) const;
  // Finite-epsilon version of the regularized integrals (j = 4, 5), evaluated literally.
  cplx chi_eps(int j, cplx k, double eps, bool tilde) const;
  // log delta_j from the nu/chi representation (branch family by tilde).
  cplx log_delta_representation(int j, cplx k, bool tilde) const;

  const NuBundle& nu() const { return nu_; }

 private:
  using Integrand = std::function<cplx(double)>;
  // Composite Gauss-Legendre on [a, b] with geometric refinement toward singular points.
  cplx integrate(double a, double b, const Integrand& g, const std::vector<double>& sing,
                 cplx k_near, bool use_k) const;
  cplx kernel(cplx k, cplx s, bool tilde) const { return tilde ? ln_tilde_branch(k, s) : ln_branch(k, s); }
  double nu_endpoint(int j, bool at_b) const;

  const CircleReflection* refl_;
  KernelOptions opt_;
  double zeta_;
  SaddleSet saddles_;
  cplx wk4_, w2k2_;
  double th4_, th2_;
  std::array<Arc, 5> arcs_;
  std::array<EndpointModel, 5> models_;
  NuBundle nu_;
};

// Polynomial (Neville) extrapolation of chi_eps to epsilon = 0 with the observed order of
// the first differences. Epsilons are fractions of the arc length when relative is set.
struct RegularizedLimit {
  cplx value;
  std::vector<double> eps;
  std::vector<cplx> samples;
  double observed_order = 0;
};
RegularizedLimit chi_eps_limit(const SectorKernels& sk, int j, cplx k, bool tilde,
                               const std::vector<double>& eps = {1e-2, 1e-3, 1e-4}, bool relative = true);

}  // namespace bsq
