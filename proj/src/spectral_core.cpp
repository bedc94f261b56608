#include "bsq/spectral_core.hpp"

#include <cmath>

namespace bsq {

const UnityFrame& unity_frame() {
  static const UnityFrame frame = [] {
    UnityFrame f;
    f.omega = kOmega;
    for (int j = 0; j < 6; ++j) f.kappa[j] = std::polar(1.0, kPi * j / 3.0);
    f.A << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    f.B << 0, 1, 0, 1, 0, 0, 0, 0, 1;
    return f;
  }();
  return frame;
}

cplx omega_pow(int j) {
  switch (((j % 3) + 3) % 3) {
    case 0: return 1.0;
    case 1: return kOmega;
    default: return kOmega2;
  }
}

PhaseTriple phase_values(cplx k) {
  if (k == 0.0) throw DomainError("phase_values: k = 0");
  PhaseTriple p;
  for (int j = 1; j <= 3; ++j) {
    const cplx w = omega_pow(j) * k;
    const cplx wi = 1.0 / w;
    p.l[j - 1] = kI * (w + wi) / (2.0 * kSqrt3);
    p.z[j - 1] = kI * (w * w + wi * wi) / (4.0 * kSqrt3);
  }
  return p;
}

cplx phi(int i, int j, double zeta, cplx k) {
  if (!(1 <= j && j < i && i <= 3)) throw DomainError("phi: need 1 <= j < i <= 3");
  const PhaseTriple p = phase_values(k);
  return (p.l[i - 1] - p.l[j - 1]) * zeta + (p.z[i - 1] - p.z[j - 1]);
}

cplx dphi21_dk(double zeta, cplx k) {
  if (k == 0.0) throw DomainError("dphi21_dk: k = 0");
  // d/dk of l_j and z_j for w = omega^j k.
  auto dl = [&](int j) {
    const cplx o = omega_pow(j);
    return kI * (o - 1.0 / (o * k * k)) / (2.0 * kSqrt3);
  };
  auto dz = [&](int j) {
    const cplx o = omega_pow(j);
    return kI * (2.0 * o * o * k - 2.0 / (o * o * k * k * k)) / (4.0 * kSqrt3);
  };
  return (dl(2) - dl(1)) * zeta + (dz(2) - dz(1));
}

SaddleSet saddle_points(double zeta) {
  const double lo = 1.0 / kSqrt3;
  if (!(zeta > lo && zeta < 1.0)) throw DomainError("saddle_points: zeta outside (1/sqrt3, 1)");
  const double r = std::sqrt(8.0 + zeta * zeta);
  const double a2 = 4.0 - zeta * zeta + zeta * r;
  const double a4 = 4.0 - zeta * zeta - zeta * r;
  SaddleSet s;
  s.zeta = zeta;
  s.k2 = cplx(zeta - r, -std::sqrt(2.0) * std::sqrt(a2)) / 4.0;
  s.k4 = cplx(zeta + r, -std::sqrt(2.0) * std::sqrt(a4)) / 4.0;
  s.k1 = std::conj(s.k2);
  s.k3 = std::conj(s.k4);
  return s;
}

int sign_re_phi(int i, int j, double zeta, cplx k, double tol) {
  const double re = phi(i, j, zeta, k).real();
  if (std::abs(re) <= tol) return 0;
  return re > 0 ? 1 : -1;
}

double distance_to_Q(cplx k) {
  double d = 1e300;
  for (const cplx& q : unity_frame().kappa) d = std::min(d, std::abs(k - q));
  return d;
}

Region classify(cplx k, double tol) {
  if (k == 0.0) throw DomainError("classify: k = 0");
  const double m = std::abs(k);
  if (std::abs(m - 1.0) <= tol) return Region::Circle;
  double th = std::arg(k);
  if (th < 0) th += 2.0 * kPi;
  const int sector = static_cast<int>(std::floor(th / (kPi / 3.0) + 0.5)) % 6;
  const int idx = (m > 1.0) ? (sector + 1) % 6 + 1 : (sector + 4) % 6 + 1;
  return static_cast<Region>(idx - 1);
}

bool in_D_reg(cplx k) {
  if (classify(k) != Region::D2) return false;
  const double m = std::abs(k);
  return (m > 1.0 && k.imag() > 0.0) || (m < 1.0 && k.imag() < 0.0);
}

bool in_D_sing(cplx k) {
  if (classify(k) != Region::D2) return false;
  const double m = std::abs(k);
  return (m > 1.0 && k.imag() < 0.0) || (m < 1.0 && k.imag() > 0.0);
}

}  // namespace bsq
