#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bsq/initial_data.hpp"
#include "bsq/spectral_core.hpp"

namespace bsq {

// P(k): Vandermonde matrix of l_1, l_2, l_3.
Mat3 vandermonde_P(cplx k);
// Companion matrix P L P^{-1} = [[0,1,0],[0,0,1],[c,-1/4,0]].
Mat3 companion_A0(cplx k);
// Middle factor of the potential: nonzero third row only.
Mat3 potential_middle(const DataSample& s);
// U(x,k) = P^{-1} M P.
Mat3 build_potential(const DataSample& s, cplx k);

// r~(k) = (omega^2 - k^2) / (1 - omega^2 k^2).
cplx r_tilde(cplx k);

struct ScatteringMatrix {
  cplx k;
  Mat3 s;
  Mat3 sA;
};

enum class Frame { Auto, Companion, Diagonal };

struct SolverOptions {
  double step = 0.1;      // Magnus step in x
  Frame frame = Frame::Auto;
  double degenerate_tol = 1e-8;  // refuse k this close to a sixth root of unity
  double polish_step = 0.025;    // step for Newton polish and residue constants
};

// Jost-solution marcher for the x-part of the Lax pair, sixth-order Magnus.
class ScatteringSolver {
 public:
  ScatteringSolver(const InitialData& data, SolverOptions opt = {});

  const InitialData& data() const { return data_; }
  const SolverOptions& options() const { return opt_; }

  // s(k) by marching from x = L; s^A from cofactors (det s = 1).
  ScatteringMatrix scattering(cplx k) const;
  // s^A(k) from the adjoint equation, independent of scattering().
  Mat3 sA_adjoint(cplx k) const;
  // X(x, k) at points xs (any order), marched from x = L with X(L) = I.
  std::vector<Mat3> solve_X(cplx k, const std::vector<double>& xs) const;

  cplx r1(cplx k) const;
  cplx r2(cplx k) const;

 private:
  struct Step {
    double x0;             // right end; the step covers [x0 - h, x0]
    std::array<cplx, 3> m31;
    std::array<cplx, 3> m32;
  };
  Mat3 march_diagonal(cplx k, bool adjoint) const;
  Mat3 march_companion(cplx k) const;
  Frame pick(cplx k) const;

  InitialData data_;
  SolverOptions opt_;
  double h_;
  std::vector<Step> steps_;  // ordered from x = L down to x = -L
};

struct ReflectionSample {
  int arc = 0;
  double theta = 0;
  cplx k;
  cplx r1, r2;
  double circle_residual = 0;   // |r1(1/(wk)) + r2(wk) + r1(w^2 k) r2(1/k)|
  double conj_residual = 0;     // |r2 - r~ conj(r1(1/conj k))|
  bool valid = true;
};

struct ReflectionData {
  std::vector<ReflectionSample> samples;
  double max_circle_residual() const;
  double max_conj_residual() const;
};

// Samples on the six open arcs between sixth roots of unity, excluding
// an exclusion radius around each root.
ReflectionData reflection_coefficients(const ScatteringSolver& solver, int per_arc,
                                       double exclusion = 1e-3, bool with_residuals = true);

// Extrapolate r1, r2 to k = +-1 along the circle from samples at distances eps * 2^m.
struct EndpointLimits {
  cplx r1_plus, r2_plus, r1_minus, r2_minus;
};
EndpointLimits endpoint_limits(const ScatteringSolver& solver, double eps = 1e-5);

// Piecewise-Chebyshev model of r1 on the unit circle, built adaptively.
class CircleReflection {
 public:
  CircleReflection() = default;
  CircleReflection(const ScatteringSolver& solver, int nodes = 24, double tol = 1e-12, int max_depth = 9);
  static CircleReflection zero();

  cplx r1(double theta) const;
  // d r1 / d theta from the differentiated Chebyshev series.
  cplx r1_deriv(double theta) const;
  // r2 on the circle from the conjugation symmetry.
  cplx r2(double theta) const;
  // 1 + r1 r2 on the circle (real).
  double one_plus_r1r2(double theta) const;
  double one_plus_r1r2_deriv(double theta) const;
  // f(e^{i theta}) = 1 + r1 r2(k) + r1 r2(1/(w^2 k)).
  double f(double theta) const;
  double f_deriv(double theta) const;
  std::size_t panel_count() const { return panels_.size(); }
  bool is_zero() const { return zero_; }

 private:
  struct Panel {
    double a, b;
    Eigen::VectorXcd c;
    Eigen::VectorXcd dc;  // coefficients of the t-derivative
  };
  const Panel& find(double theta) const;
  std::vector<Panel> panels_;
  bool zero_ = true;
};

struct SolitonZero {
  cplx k0;
  cplx c;                // residue constant
  std::optional<cplx> d; // only for nonreal zeros
  cplx s11_dot;
};

struct SolitonData {
  std::vector<SolitonZero> zeros;
};

struct SearchBox {
  double re_lo, re_hi, im_lo, im_hi;
};

// s11 by the column-stable march (valid where column 1 decays from +infinity).
cplx s11_stable(const ScatteringSolver& solver, cplx k);

// Zeros of s11 in a rectangle by argument principle + Newton polish.
std::vector<cplx> find_s11_zeros(const ScatteringSolver& solver, const SearchBox& box,
                                 double tol = 1e-10);
// Default search boxes inside D_2 on both sides of the circle.
std::vector<SearchBox> default_search_boxes();

SolitonData residue_constants(const ScatteringSolver& solver, const std::vector<cplx>& zeros);
// Residue constant from s11'(k0) and the first row; nullopt when c = 0 (removable pole).
std::optional<SolitonZero> residue_from_row(cplx k0, cplx sdot, cplx s12, cplx s13);

cplx d_from_c(cplx k0, cplx c);
// Nonsingularity quantity i (w^2 k0^2 - w) c for real zeros.
cplx nonsingularity_value(cplx k0, cplx c);

struct ValidationReport {
  bool mass_ok = true;
  double mass = 0;
  bool no_high_modes = true;        // (iii)
  double sup_r1_on_segment = 0;
  bool generic_at_pm1 = true;       // (ii), heuristic
  std::vector<double> generic_probes;
  bool zeros_in_regions = true;     // (i)
  std::vector<std::string> notes;
  bool all_ok() const { return mass_ok && no_high_modes && generic_at_pm1 && zeros_in_regions; }
};

struct ValidatorOptions {
  double mass_tol = 1e-8;
  double high_mode_tol = 1e-2;
  double generic_floor = 1e-6;
  int segment_samples = 40;
};

ValidationReport assumption_validators(const ScatteringSolver& solver, const SolitonData& solitons,
                                       ValidatorOptions opt = {});

}  // namespace bsq
