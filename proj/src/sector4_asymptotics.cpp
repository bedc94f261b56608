#include "bsq/sector4_asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "bsq/numerics.hpp"

namespace bsq {

cplx blaschke_P(cplx k, const SolitonData& Z) {
  cplx P = 1.0;
  for (const auto& z : Z.zeros) {
    const cplx k0 = z.k0;
    if (k0.real() <= 0.0) continue;
    cplx num, den;
    if (k0.imag() == 0.0) {
      if (!(k0.real() > 1.0)) continue;
      num = (k - kOmega2 * k0) * (k - kOmega / k0);
      den = (k - kOmega * k0) * (k - kOmega2 / k0);
    } else {
      if (!in_D_reg(k0)) continue;
      const cplx kb = std::conj(k0);
      num = (k - k0) * (k - 1.0 / k0) * (k - kOmega2 * kb) * (k - kOmega / kb);
      den = (k - kb) * (k - 1.0 / kb) * (k - kOmega * k0) * (k - kOmega2 / k0);
    }
    if (std::abs(den) < 1e-300) throw DomainError("blaschke_P: k at a pole");
    P *= num / den;
  }
  return P;
}

cplx log_script_D(int which, cplx k, const SectorKernels& sk) {
  const cplx wk = kOmega * k, w2k = kOmega2 * k, ik = 1.0 / k, iwk = 1.0 / (kOmega * k), iw2k = 1.0 / (kOmega2 * k);
  auto L = [&](int j, cplx p) { return sk.log_delta(j, p); };
  if (which == 1) {
    return (L(1, wk) + 2.0 * L(1, iw2k) - 2.0 * L(1, w2k) - L(1, iwk) - L(1, ik)) +
           (L(2, w2k) + 2.0 * L(2, ik) - 2.0 * L(2, wk) - L(2, iw2k) - L(2, iwk)) +
           (L(3, wk) + L(3, w2k) + 2.0 * L(3, iwk) - L(3, ik) - L(3, iw2k)) +
           (2.0 * L(4, w2k) + L(4, ik) + L(4, iwk) - L(4, k) - L(4, wk) - 2.0 * L(4, iw2k)) +
           (2.0 * L(5, wk) + L(5, iwk) + L(5, iw2k) - L(5, k) - 2.0 * L(5, ik) - L(5, w2k));
  }
  if (which == 2) {
    return (2.0 * L(1, wk) + L(1, iw2k) + L(1, ik) - L(1, w2k) - 2.0 * L(1, iwk) - L(1, k)) +
           (L(2, ik) + L(2, iwk) - L(2, wk) - 2.0 * L(2, iw2k) - L(2, w2k)) +
           (2.0 * L(3, w2k) + L(3, iwk) + L(3, iw2k) - 2.0 * L(3, ik) - L(3, wk)) +
           (L(4, w2k) + 2.0 * L(4, iwk) - 2.0 * L(4, wk) - L(4, iw2k) - L(4, ik)) +
           (L(5, wk) + 2.0 * L(5, iw2k) + L(5, w2k) - L(5, ik) - L(5, iwk));
  }
  throw DomainError("script_D: which must be 1 or 2");
}

ZStar z_star(double zeta) {
  const SaddleSet s = saddle_points(zeta);
  const cplx k4 = s.k4, k2 = s.k2;
  const cplx pre = std::sqrt(2.0) * std::polar(1.0, kPi / 4.0);
  ZStar z;
  z.z1 = pre * std::sqrt(kOmega * (4.0 - 3.0 * k4 * zeta - k4 * k4 * k4 * zeta) / (4.0 * std::pow(k4, 4)));
  z.z2 = pre * std::sqrt(-kOmega2 * (4.0 - 3.0 * k2 * zeta - k2 * k2 * k2 * zeta) / (4.0 * std::pow(k2, 4)));
  // Pick the root with -i w k4 z1 > 0 (resp. -i w^2 k2 z2 > 0).
  if ((-kI * kOmega * k4 * z.z1).real() < 0) z.z1 = -z.z1;
  if ((-kI * kOmega2 * k2 * z.z2).real() < 0) z.z2 = -z.z2;
  z.ln_z1 = cplx(std::log(std::abs(z.z1)), 0.5 * kPi - std::arg(kOmega * k4));
  z.ln_z2 = cplx(std::log(std::abs(z.z2)), 0.5 * kPi - std::arg(kOmega2 * k2));
  return z;
}

QValues q_values(const CircleReflection& refl, const SaddleSet& s) {
  auto r1 = [&](cplx k) { return refl.r1(std::arg(k)); };
  auto art = [&](cplx k) { return std::sqrt(std::abs(r_tilde(k))); };
  QValues q;
  const cplx k4 = s.k4, k2 = s.k2;
  const cplx a = 1.0 / k4, b = kOmega2 * k2, c = kOmega * k2, d = 1.0 / k2, e = 1.0 / (kOmega * k2);
  if (distance_to_Q(a) < 1e-3 || distance_to_Q(b) < 1e-3 || distance_to_Q(c) < 1e-3 || distance_to_Q(d) < 1e-3)
    throw DomainError("q_values: evaluation point too close to a sixth root of unity");
  q.q3 = art(a) * r1(a);
  q.q2 = std::sqrt(cplx(r_tilde(b).real(), 0.0)) * r1(b);
  q.q5 = art(c) * r1(c);
  q.q6 = art(d) * r1(d);
  q.q4 = art(e) * r1(e);
  q.q1 = std::sqrt(cplx(r_tilde(kOmega * k4).real(), 0.0)) * r1(kOmega * k4);
  q.constraint_residual = std::abs(q.q4 - std::conj(q.q5) - q.q2 * std::conj(q.q6));
  return q;
}

SectorIngredients sector_ingredients(const CircleReflection& refl, const SolitonData& Z, double zeta,
                                     KernelOptions opt) {
  SectorKernels sk(refl, zeta, opt);
  SectorIngredients in;
  in.zeta = zeta;
  in.saddles = sk.saddles();
  in.nu = sk.nu();
  const cplx a = sk.wk4(), b = sk.w2k2();
  in.chi1_edge_a = sk.chi1_edge(a, false);
  in.chi1_a = sk.chi(1, a, false) - in.chi1_edge_a;
  in.chit2_a = sk.chi(2, a, true);
  in.chit3_a = sk.chi(3, a, true);
  in.chi2_b = sk.chi(2, b, false);
  in.chi3_b = sk.chi(3, b, false);
  in.chit4_b = sk.chi(4, b, true);
  in.chit5_b = sk.chi(5, b, true);
  const cplx k4 = in.saddles.k4, k2 = in.saddles.k2;
  in.P_ratio1 = blaschke_P(kOmega * k4, Z) / blaschke_P(kOmega2 * k4, Z);
  in.P_ratio2 = blaschke_P(kOmega2 * k2, Z) / blaschke_P(kOmega * k2, Z);
  in.log_D1 = log_script_D(1, a, sk);
  in.log_D2 = log_script_D(2, b, sk);
  in.lnt_cross = ln_tilde_branch(a, b);
  in.ln_cross = ln_branch(b, a);
  in.zs = z_star(zeta);
  in.q = q_values(refl, in.saddles);
  in.rt_inv_k4 = std::abs(r_tilde(1.0 / k4));
  in.rt_inv_k2 = std::abs(r_tilde(1.0 / k2));
  return in;
}

DCoefficients d_coefficients(const SectorIngredients& in, double t) {
  if (!(t > 0)) throw DomainError("d_coefficients: t must be positive");
  const NuBundle& n = in.nu;
  const double lt = std::log(t);
  DCoefficients d;
  d.log_d10 = -in.chi1_a - in.chit2_a + 2.0 * in.chit3_a + kI * (n.nu2 - 2.0 * n.nu4) * in.lnt_cross -
              kI * n.nuhat1 * lt - 2.0 * kI * n.nuhat1 * in.zs.ln_z1 + in.log_D1;
  d.log_d20 = -2.0 * in.chi2_b + in.chi3_b - in.chit4_b + 2.0 * in.chit5_b +
              kI * (n.nu3 - 2.0 * n.nu1) * in.ln_cross - kI * n.nuhat2 * lt - 2.0 * kI * n.nuhat2 * in.zs.ln_z2 +
              in.log_D2;
  return d;
}

namespace {

double arg_or_zero(cplx z) { return z == 0.0 ? 0.0 : std::arg(z); }

double sqrt_nonneg(double v, const char* what) {
  if (v < -1e-10) throw std::runtime_error(std::string("negative exponent ") + what);
  return std::sqrt(std::max(0.0, v));
}

}  // namespace

AsymptoticEvaluation amplitudes_phases(const SectorIngredients& in, double t) {
  const SaddleSet& s = in.saddles;
  const cplx k4 = s.k4, k2 = s.k2;
  const double zeta = in.zeta;
  const DCoefficients d = d_coefficients(in, t);
  AsymptoticEvaluation ev;
  ev.t = t;
  ev.zeta = zeta;
  ev.x = zeta * t;
  const double s1 = sqrt_nonneg(in.nu.nuhat1, "nuhat1"), s2 = sqrt_nonneg(in.nu.nuhat2, "nuhat2");
  const cplx den1 = -kI * kOmega * k4 * in.zs.z1 * std::sqrt(in.rt_inv_k4);
  const cplx A1 = 4.0 * kSqrt3 * s1 * k4.imag() / den1 * std::sin(std::arg(kOmega * k4));
  const cplx den2 = -kI * kOmega2 * k2 * in.zs.z2;
  const cplx A2 = -4.0 * kSqrt3 * s2 * std::sqrt(in.rt_inv_k2) * k2.imag() / den2 * std::sin(std::arg(kOmega2 * k2));
  ev.A1 = A1.real();
  ev.A2 = A2.real();
  ev.A1_imag = A1.imag();
  ev.A2_imag = A2.imag();
  const double g1 = in.nu.nuhat1 > 0 ? log_gamma(cplx(0.0, in.nu.nuhat1)).imag() : 0.0;
  const double g2 = in.nu.nuhat2 > 0 ? log_gamma(cplx(0.0, in.nu.nuhat2)).imag() : 0.0;
  ev.alpha1 = 0.75 * kPi + arg_or_zero(in.q.q3) + g1 + d.log_d10.imag() + std::arg(in.P_ratio1) -
              t * phi(3, 1, zeta, kOmega * k4).imag();
  ev.alpha2 = 0.75 * kPi - arg_or_zero(in.q.q6 - in.q.q2 * in.q.q5) + g2 + d.log_d20.imag() + std::arg(in.P_ratio2) -
              t * phi(3, 2, zeta, kOmega2 * k2).imag();
  ev.u = (ev.A1 * std::cos(ev.alpha1) + ev.A2 * std::cos(ev.alpha2)) / std::sqrt(t);
  ev.err_scale = std::log(t) / t;
  return ev;
}

AsymptoticEvaluation u_asym(double x, double t, const SectorIngredients& in, ZetaWindow w) {
  if (!(t >= 2.0)) throw DomainError("u_asym: t must be at least 2");
  const double zeta = x / t;
  if (zeta < w.lo || zeta > w.hi) throw DomainError("u_asym: x/t outside the zeta window");
  if (std::abs(zeta - in.zeta) > 1e-12 * std::max(1.0, std::abs(zeta)))
    throw DomainError("u_asym: ingredients computed for a different zeta");
  AsymptoticEvaluation ev = amplitudes_phases(in, t);
  ev.x = x;
  return ev;
}

AsymptoticEvaluation AsymptoticModel::evaluate(double x, double t) const {
  if (!(t >= 2.0)) throw DomainError("u_asym: t must be at least 2");
  const double zeta = x / t;
  if (zeta < w_.lo || zeta > w_.hi) throw DomainError("u_asym: x/t outside the zeta window");
  const SectorIngredients in = ingredients(zeta);
  AsymptoticEvaluation ev = amplitudes_phases(in, t);
  ev.x = x;
  return ev;
}

ModelBeta model_beta1(cplx q1, cplx q3) {
  const double a = 1.0 + std::norm(q1), b = a - std::norm(q3);
  if (!(b > 0)) throw DomainError("model_beta1: 1 + |q1|^2 - |q3|^2 must be positive");
  const double nu1 = -std::log(a) / (2.0 * kPi), nu3 = -std::log(b) / (2.0 * kPi);
  ModelBeta m;
  m.nuhat = nu3 - nu1;
  if (q3 == 0.0 || m.nuhat <= 0.0) {
    m.b12 = m.b21 = 0.0;
    m.nuhat = std::max(0.0, m.nuhat);
    return m;
  }
  const double nh = m.nuhat;
  const double common = std::exp(1.5 * kPi * nh) * std::sqrt(2.0 * kPi) / std::expm1(2.0 * kPi * nh);
  m.b12 = std::polar(1.0, 0.75 * kPi) * common * std::exp(2.0 * kPi * nu1) * q3 / gamma_fn(cplx(0.0, -nh));
  m.b21 = std::polar(1.0, -0.75 * kPi) * common * std::conj(q3) / gamma_fn(cplx(0.0, nh));
  return m;
}

ModelBeta model_beta2(cplx q2, cplx q4, cplx q5, cplx q6, double constraint_tol) {
  const double a = 1.0 + std::norm(q2) - std::norm(q4), b = 1.0 - std::norm(q5) - std::norm(q6);
  if (!(a > 0)) throw DomainError("model_beta2: 1 + |q2|^2 - |q4|^2 must be positive");
  if (!(b > 0)) throw DomainError("model_beta2: 1 - |q5|^2 - |q6|^2 must be positive");
  if (std::abs(q4 - std::conj(q5) - q2 * std::conj(q6)) > constraint_tol)
    throw DomainError("model_beta2: q4 - conj(q5) - q2 conj(q6) must vanish");
  const double nu2 = -std::log(1.0 + std::norm(q2)) / (2.0 * kPi);
  const double nu4 = -std::log(a) / (2.0 * kPi);
  const double nu5 = -std::log(b) / (2.0 * kPi);
  ModelBeta m;
  m.nuhat = nu2 + nu5 - nu4;
  const cplx w = q6 - q2 * q5;
  if (w == 0.0 || m.nuhat <= 0.0) {
    m.b12 = m.b21 = 0.0;
    m.nuhat = std::max(0.0, m.nuhat);
    return m;
  }
  const double nh = m.nuhat;
  const double common = std::exp(0.5 * kPi * nh) * std::sqrt(2.0 * kPi) / (2.0 * std::sinh(kPi * nh));
  m.b12 = std::polar(1.0, 0.75 * kPi) * common * std::exp(2.0 * kPi * (nu4 - nu2)) * std::conj(w) /
          gamma_fn(cplx(0.0, -nh));
  m.b21 = std::polar(1.0, -0.75 * kPi) * common * std::exp(2.0 * kPi * nu2) * w / gamma_fn(cplx(0.0, nh));
  return m;
}

}  // namespace bsq
