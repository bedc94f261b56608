#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace bsq {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrt3 = 1.73205080756887729353;
inline constexpr cplx kI{0.0, 1.0};

inline const cplx kOmega{-0.5, 0.5 * kSqrt3};
inline const cplx kOmega2{-0.5, -0.5 * kSqrt3};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct UnityFrame {
  cplx omega;
  std::array<cplx, 6> kappa;
  Eigen::Matrix3d A;
  Eigen::Matrix3d B;
};

const UnityFrame& unity_frame();

// omega^j for integer j (any sign).
cplx omega_pow(int j);

struct PhaseTriple {
  std::array<cplx, 3> l;
  std::array<cplx, 3> z;
};

PhaseTriple phase_values(cplx k);

// Phi_ij(zeta, k) = (l_i - l_j) zeta + (z_i - z_j), 1 <= j < i <= 3.
cplx phi(int i, int j, double zeta, cplx k);

// Analytic k-derivative of Phi_21.
cplx dphi21_dk(double zeta, cplx k);

struct SaddleSet {
  double zeta;
  cplx k1, k2, k3, k4;
};

SaddleSet saddle_points(double zeta);

int sign_re_phi(int i, int j, double zeta, cplx k, double tol = 1e-14);

// Distance from k to the nearest sixth root of unity.
double distance_to_Q(cplx k);

enum class Region { D1, D2, D3, D4, D5, D6, Circle };

// Sector/disk classification of k != 0 in the six open regions
// bounded by the unit circle and the rays arg k = pi/6 + n pi/3.
Region classify(cplx k, double tol = 1e-12);

bool in_D_reg(cplx k);
bool in_D_sing(cplx k);

}  // namespace bsq
