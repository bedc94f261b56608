#pragma once

#include <optional>
#include <vector>

#include "bsq/cauchy_kernels.hpp"
#include "bsq/direct_scattering.hpp"

namespace bsq {

// Blaschke-type product over the right-moving part of the soliton set; 1 when none.
cplx blaschke_P(cplx k, const SolitonData& Z);

// log of the delta products D_1 (which = 1) and D_2 (which = 2), summed from log delta_j.
cplx log_script_D(int which, cplx k, const SectorKernels& sk);
inline cplx script_D(int which, cplx k, const SectorKernels& sk) { return std::exp(log_script_D(which, k, sk)); }

struct ZStar {
  cplx z1, z2;
  cplx ln_z1, ln_z2;  // explicit branches
};
ZStar z_star(double zeta);

struct QValues {
  cplx q2, q3, q4, q5, q6;
  cplx q1;  // companion of q3 at omega k4
  double constraint_residual = 0;  // |q4 - conj(q5) - q2 conj(q6)|
};
QValues q_values(const CircleReflection& refl, const SaddleSet& s);

struct SectorIngredients {
  double zeta = 0;
  SaddleSet saddles;
  NuBundle nu;
  cplx chi1_a, chit2_a, chit3_a;             // at omega k4; chi1_a includes the endpoint term at i
  cplx chi1_edge_a;
  cplx chi2_b, chi3_b, chit4_b, chit5_b;     // at omega^2 k2
  cplx P_ratio1 = 1.0, P_ratio2 = 1.0;
  cplx log_D1, log_D2;
  cplx lnt_cross;  // ln~_{omega^2 k2}(omega k4 - omega^2 k2)
  cplx ln_cross;   // ln_{omega k4}(omega^2 k2 - omega k4)
  ZStar zs;
  QValues q;
  double rt_inv_k4 = 0, rt_inv_k2 = 0;  // |r~(1/k4)|, |r~(1/k2)|
};

SectorIngredients sector_ingredients(const CircleReflection& refl, const SolitonData& Z, double zeta,
                                     KernelOptions opt = {});

struct DCoefficients {
  cplx log_d10, log_d20;
  cplx d10() const { return std::exp(log_d10); }
  cplx d20() const { return std::exp(log_d20); }
};
DCoefficients d_coefficients(const SectorIngredients& in, double t);

struct AsymptoticEvaluation {
  double x = 0, t = 0, zeta = 0;
  double A1 = 0, A2 = 0;
  double alpha1 = 0, alpha2 = 0;
  double u = 0;
  double err_scale = 0;  // ln t / t
  double A1_imag = 0, A2_imag = 0;
};

// A and alpha at time t (x = zeta t).
AsymptoticEvaluation amplitudes_phases(const SectorIngredients& in, double t);

struct ZetaWindow {
  double lo = 0.62, hi = 0.95;
};

// Leading-order u at (x, t); zeta = x / t must lie in the window.
AsymptoticEvaluation u_asym(double x, double t, const SectorIngredients& in, ZetaWindow w = {});

// Closed-form coefficients of the two model problems.
struct ModelBeta {
  cplx b12, b21;
  double nuhat = 0;
};
ModelBeta model_beta1(cplx q1, cplx q3);
ModelBeta model_beta2(cplx q2, cplx q4, cplx q5, cplx q6, double constraint_tol = 1e-10);

// Shared state for sweeps: reflection model and soliton set, ingredients per zeta.
class AsymptoticModel {
 public:
  AsymptoticModel(CircleReflection refl, SolitonData Z, KernelOptions opt = {}, ZetaWindow w = {})
      : refl_(std::move(refl)), Z_(std::move(Z)), opt_(opt), w_(w) {}
  SectorIngredients ingredients(double zeta) const { return sector_ingredients(refl_, Z_, zeta, opt_); }
  AsymptoticEvaluation evaluate(double x, double t) const;
  const CircleReflection& reflection() const { return refl_; }
  const SolitonData& solitons() const { return Z_; }
  const ZetaWindow& window() const { return w_; }

 private:
  CircleReflection refl_;
  SolitonData Z_;
  KernelOptions opt_;
  ZetaWindow w_;
};

}  // namespace bsq
