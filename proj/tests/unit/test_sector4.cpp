#include <random>

#include "doctest.h"

#include "bsq/numerics.hpp"
#include "bsq/sector4_asymptotics.hpp"

using namespace bsq;

namespace {

const CircleReflection& refl() {
  static const ScatteringSolver S(InitialData::bandlimited_gaussian(0.1, 2.0, 0.05, 0.75, 0.05));
  static const CircleReflection C(S);
  return C;
}

cplx circle(double th) { return std::polar(1.0, th); }

SolitonZero real_zero(double k0) {
  SolitonZero z;
  z.k0 = k0;
  // nonsingularity value i (w^2 k0^2 - w) c = 1
  z.c = 1.0 / (kI * (kOmega2 * k0 * k0 - kOmega));
  z.s11_dot = 1.0;
  return z;
}

}  // namespace

TEST_CASE("Blaschke product properties") {
  CHECK(blaschke_P(cplx(0.4, 1.3), {}) == 1.0);
  SolitonData Z;
  Z.zeros.push_back(real_zero(1.5));
  SolitonZero b;
  b.k0 = cplx(1.7, 0.3);
  b.c = cplx(0.2, 0.1);
  b.d = d_from_c(b.k0, b.c);
  Z.zeros.push_back(b);
  REQUIRE(in_D_reg(b.k0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> a(-kPi, kPi), x(-2.0, 2.0);
  for (int n = 0; n < 50; ++n) {
    const cplx k = circle(a(rng));
    if (distance_to_Q(k) < 1e-6) continue;
    CHECK(std::abs(std::abs(blaschke_P(k, Z)) - 1.0) < 1e-12);
  }
  for (int n = 0; n < 20; ++n) {
    const cplx k(x(rng), x(rng));
    if (std::abs(k) < 0.1) continue;
    const cplx p = blaschke_P(k, Z), q = blaschke_P(1.0 / k, Z);
    CHECK(std::abs(p - q) < 1e-10 * std::max(1.0, std::abs(p)));
  }
  // left zeros do not contribute
  SolitonData L = Z;
  L.zeros.push_back(real_zero(-0.6));
  CHECK(blaschke_P(cplx(0.3, 0.8), L) == blaschke_P(cplx(0.3, 0.8), Z));
  CHECK_THROWS_AS(blaschke_P(kOmega * 1.5, Z), DomainError);
}

TEST_CASE("z star normalisation and Hessian") {
  for (double zeta : {0.62, 0.7, 0.9}) {
    const SaddleSet s = saddle_points(zeta);
    const ZStar z = z_star(zeta);
    const cplx p1 = -kI * kOmega * s.k4 * z.z1, p2 = -kI * kOmega2 * s.k2 * z.z2;
    CHECK(std::abs(p1.imag()) < 1e-12);
    CHECK(p1.real() > 0.0);
    CHECK(std::abs(p2.imag()) < 1e-12);
    CHECK(p2.real() > 0.0);
    const double aw = std::arg(kOmega * s.k4);
    CHECK(aw > kPi / 2.0);
    CHECK(aw < 2.0 * kPi / 3.0);
    CHECK(std::abs(std::arg(z.z1) - (kPi / 2.0 - aw)) < 1e-12);
    CHECK(std::abs(std::exp(z.ln_z1) - z.z1) < 1e-13);
    CHECK(std::abs(std::exp(z.ln_z2) - z.z2) < 1e-13);
    // z^2 = -i times the second derivative of the phase
    const cplx a = kOmega * s.k4, b = kOmega2 * s.k2, h = 1e-4;
    const cplx d31 = (phi(3, 1, zeta, a + h) - 2.0 * phi(3, 1, zeta, a) + phi(3, 1, zeta, a - h)) / (h * h);
    const cplx d32 = (phi(3, 2, zeta, b + h) - 2.0 * phi(3, 2, zeta, b) + phi(3, 2, zeta, b - h)) / (h * h);
    CHECK(std::abs(z.z1 * z.z1 + kI * d31) < 1e-6);
    CHECK(std::abs(z.z2 * z.z2 + kI * d32) < 1e-6);
  }
}

TEST_CASE("phase derivatives along the saddle") {
  for (double zeta : {0.65, 0.8, 0.93}) {
    const double dz = 1e-5;
    const SaddleSet sp = saddle_points(zeta + dz), sm = saddle_points(zeta - dz), s = saddle_points(zeta);
    const double d31 = (phi(3, 1, zeta + dz, kOmega * sp.k4).imag() - phi(3, 1, zeta - dz, kOmega * sm.k4).imag()) / (2 * dz);
    const double d32 = (phi(3, 2, zeta + dz, kOmega2 * sp.k2).imag() - phi(3, 2, zeta - dz, kOmega2 * sm.k2).imag()) / (2 * dz);
    CHECK(std::abs(d31 + s.k4.imag()) < 1e-6);
    CHECK(std::abs(d32 - s.k2.imag()) < 1e-6);
  }
}

TEST_CASE("gamma modulus on the imaginary axis") {
  for (double nu : {0.01, 0.3, 1.0, 2.5}) {
    const double ref = std::sqrt(2.0 * kPi / (nu * (std::exp(kPi * nu) - std::exp(-kPi * nu))));
    CHECK(std::abs(std::abs(gamma_fn(cplx(0.0, nu))) - ref) < 1e-12 * ref);
  }
  CHECK(std::abs(gamma_fn(5.0) - 24.0) < 1e-11);
  CHECK(std::abs(gamma_fn(0.5) - std::sqrt(kPi)) < 1e-13);
}

TEST_CASE("model problem products") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  double e1 = 0, e2 = 0;
  int n1 = 0, n2 = 0;
  while (n1 < 100) {
    const cplx q1(0.8 * U(rng), 0.8 * U(rng)), q3(0.8 * U(rng), 0.8 * U(rng));
    if (1 + std::norm(q1) - std::norm(q3) <= 0) continue;
    const ModelBeta m = model_beta1(q1, q3);
    e1 = std::max(e1, std::abs(m.b12 * m.b21 - m.nuhat));
    ++n1;
  }
  while (n2 < 100) {
    const cplx q2(0.7 * U(rng), 0.7 * U(rng)), q5(0.5 * U(rng), 0.5 * U(rng)), q6(0.5 * U(rng), 0.5 * U(rng));
    if (std::norm(q5) + std::norm(q6) >= 1) continue;
    const cplx q4 = std::conj(q5) + q2 * std::conj(q6);
    if (1 + std::norm(q2) - std::norm(q4) <= 0) continue;
    const ModelBeta m = model_beta2(q2, q4, q5, q6);
    e2 = std::max(e2, std::abs(m.b12 * m.b21 - m.nuhat));
    ++n2;
  }
  CHECK(e1 < 1e-12);
  CHECK(e2 < 1e-12);
  const ModelBeta z = model_beta1(cplx(0.3, 0.1), 0.0);
  CHECK(z.b12 == 0.0);
  CHECK(z.b21 == 0.0);
  CHECK(z.nuhat == 0.0);
  CHECK_THROWS_AS(model_beta1(0.0, 1.5), DomainError);
  CHECK_THROWS_AS(model_beta2(0.1, 0.9, 0.1, 0.2), DomainError);
}

TEST_CASE("zero data asymptotics vanish") {
  const CircleReflection Z = CircleReflection::zero();
  const SectorIngredients in = sector_ingredients(Z, {}, 0.75);
  CHECK(in.q.q1 == 0.0);
  CHECK(in.q.q3 == 0.0);
  CHECK(in.q.q6 == 0.0);
  const DCoefficients d = d_coefficients(in, 100.0);
  CHECK(std::abs(d.d10() - 1.0) < 1e-15);
  CHECK(std::abs(d.d20() - 1.0) < 1e-15);
  const AsymptoticEvaluation ev = u_asym(75.0, 100.0, in);
  CHECK(ev.A1 == 0.0);
  CHECK(ev.u == 0.0);
  CHECK(std::abs(script_D(1, kOmega * in.saddles.k4, SectorKernels(Z, 0.75)) - 1.0) == 0.0);
}

TEST_CASE("moduli of d10 and d20") {
  for (double zeta : {0.62, 0.75, 0.95}) {
    const SectorIngredients in = sector_ingredients(refl(), {}, zeta);
    for (double t : {100.0, 400.0}) {
      const DCoefficients d = d_coefficients(in, t);
      CHECK(std::abs(std::abs(d.d10()) - std::exp(-kPi * in.nu.nu1)) < 1e-8);
      CHECK(std::abs(std::abs(d.d20()) - std::exp(kPi * (2.0 * in.nu.nu2 - in.nu.nu4))) < 1e-8);
    }
  }
}

TEST_CASE("script D from the two representations") {
  const SectorKernels K(refl(), 0.75);
  for (const auto& [which, k] : {std::pair{1, K.wk4()}, std::pair{2, K.w2k2()}, std::pair{1, cplx(0.4, 1.6)}}) {
    const cplx D = script_D(which, k, K);
    CHECK(std::isfinite(std::abs(D)));
    CHECK(std::abs(D) > 0.0);
  }
  // off the contour both delta representations give the same product
  const cplx k(1.3, 0.7);
  const cplx wk = kOmega * k, w2k = kOmega2 * k, ik = 1.0 / k, iwk = 1.0 / (kOmega * k), iw2k = 1.0 / (kOmega2 * k);
  auto L = [&](int j, cplx p) { return K.log_delta_representation(j, p, false); };
  const cplx rep = (L(1, wk) + 2.0 * L(1, iw2k) - 2.0 * L(1, w2k) - L(1, iwk) - L(1, ik)) +
                   (L(2, w2k) + 2.0 * L(2, ik) - 2.0 * L(2, wk) - L(2, iw2k) - L(2, iwk)) +
                   (L(3, wk) + L(3, w2k) + 2.0 * L(3, iwk) - L(3, ik) - L(3, iw2k)) +
                   (2.0 * L(4, w2k) + L(4, ik) + L(4, iwk) - L(4, k) - L(4, wk) - 2.0 * L(4, iw2k)) +
                   (2.0 * L(5, wk) + L(5, iwk) + L(5, iw2k) - L(5, k) - 2.0 * L(5, ik) - L(5, w2k));
  CHECK(std::abs(std::exp(rep) - script_D(1, k, K)) < 1e-7);
}

TEST_CASE("q values") {
  const SectorIngredients in = sector_ingredients(refl(), {}, 0.75);
  CHECK(in.q.constraint_residual < 1e-6);
  CHECK(std::abs(in.q.q4 - std::conj(in.q.q5) - in.q.q2 * std::conj(in.q.q6)) == doctest::Approx(in.q.constraint_residual));
  CHECK(std::abs(in.q.q3) > 0.0);
}

TEST_CASE("amplitudes are real and t independent") {
  const SectorIngredients in = sector_ingredients(refl(), {}, 0.8);
  const AsymptoticEvaluation a = amplitudes_phases(in, 100.0), b = amplitudes_phases(in, 1000.0);
  CHECK(std::abs(a.A1_imag) < 1e-10 * std::max(1.0, std::abs(a.A1)));
  CHECK(std::abs(a.A2_imag) < 1e-10 * std::max(1.0, std::abs(a.A2)));
  CHECK(a.A1 == b.A1);
  CHECK(a.A2 == b.A2);
  CHECK(a.A1 != 0.0);
  // envelope of sqrt(t) u
  const double env = std::abs(a.A1) + std::abs(a.A2);
  CHECK(std::abs(a.u) * std::sqrt(100.0) <= env * (1.0 + 1e-12));
  CHECK(a.err_scale == doctest::Approx(std::log(100.0) / 100.0));
}

TEST_CASE("only right zeros shift the phases") {
  const double zeta = 0.75, t = 100.0;
  const AsymptoticEvaluation base = amplitudes_phases(sector_ingredients(refl(), {}, zeta), t);
  SolitonData left;
  left.zeros.push_back(real_zero(-0.6));
  const AsymptoticEvaluation l = amplitudes_phases(sector_ingredients(refl(), left, zeta), t);
  CHECK(l.alpha1 == base.alpha1);
  CHECK(l.alpha2 == base.alpha2);
  CHECK(l.u == base.u);
  SolitonData right;
  right.zeros.push_back(real_zero(1.5));
  const SectorIngredients ir = sector_ingredients(refl(), right, zeta);
  const AsymptoticEvaluation r = amplitudes_phases(ir, t);
  const cplx a = kOmega * ir.saddles.k4;
  const double shift = std::arg(blaschke_P(a, right) / blaschke_P(kOmega2 * ir.saddles.k4, right));
  CHECK(std::abs(std::remainder(r.alpha1 - base.alpha1 - shift, 2.0 * kPi)) < 1e-10);
  CHECK(std::abs(shift) > 1e-3);
  CHECK(r.A1 == base.A1);
}

TEST_CASE("evaluation domain checks") {
  const SectorIngredients in = sector_ingredients(refl(), {}, 0.75);
  CHECK_THROWS_AS(u_asym(75.0, 1.0, in), DomainError);
  CHECK_THROWS_AS(u_asym(50.0, 100.0, in), DomainError);
  CHECK_THROWS_AS(u_asym(80.0, 100.0, in), DomainError);
  CHECK_NOTHROW(u_asym(75.0, 100.0, in));
  const AsymptoticModel M(CircleReflection::zero(), {});
  CHECK_THROWS_AS(M.evaluate(99.0, 100.0), DomainError);
}
