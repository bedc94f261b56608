#include <random>

#include "doctest.h"

#include "bsq/cauchy_kernels.hpp"

using namespace bsq;

namespace {

struct Fixture {
  ScatteringSolver S{InitialData::bandlimited_gaussian(0.1, 2.0, 0.05, 0.75, 0.05)};
  CircleReflection C{S};
};

const Fixture& fx() {
  static const Fixture f;
  return f;
}

cplx circle(double th) { return std::polar(1.0, th); }

}  // namespace

TEST_CASE("log branches") {
  const cplx s = circle(1.9);
  CHECK(ln_branch(s + 1.0, s).imag() == doctest::Approx(2.0 * kPi));
  CHECK(std::abs(ln_tilde_branch(s + 1.0, s).imag()) < 1e-14);
  for (cplx k : {cplx(0.3, -0.4), cplx(2.0, 1.0), cplx(-1.5, 0.5), cplx(0.1, 0.2)}) {
    CHECK(std::abs(std::exp(ln_branch(k, s)) - (k - s)) < 1e-14);
    CHECK(std::abs(std::exp(ln_tilde_branch(k, s)) - (k - s)) < 1e-14);
  }
  // cut along the ray above i
  const double jump = ln_branch(cplx(-1e-9, 2.0), s).imag() - ln_branch(cplx(1e-9, 2.0), s).imag();
  CHECK(std::abs(std::abs(jump) - 2.0 * kPi) < 1e-6);
  // continuous across the real axis to the right
  CHECK(std::abs(ln_branch(cplx(2.0, 1e-9), s) - ln_branch(cplx(2.0, -1e-9), s)) < 1e-6);
  // tilde cut along the negative axis
  const double tj = ln_tilde_branch(cplx(-3.0, 1e-9), s).imag() - ln_tilde_branch(cplx(-3.0, -1e-9), s).imag();
  CHECK(std::abs(std::abs(tj) - 2.0 * kPi) < 1e-6);
}

TEST_CASE("arc sweep and caps") {
  const cplx p = circle(0.2), q = circle(1.0);
  CHECK(in_cap(0.98 * circle(0.6), p, q));
  CHECK_FALSE(in_cap(0.5 * circle(0.6), p, q));
  CHECK_FALSE(in_cap(1.2 * circle(0.6), p, q));
  // sweep from outside is the plain angle subtended by the chord
  const cplx k = 2.0 * circle(0.6);
  CHECK(arc_sweep(k, p, q) == doctest::Approx(std::arg((q - k) / (p - k))));
  // a point inside the cap sees the arc turn by more than pi
  CHECK(arc_sweep(0.98 * circle(0.6), p, q) > kPi);
}

TEST_CASE("zero data gives trivial kernels") {
  const CircleReflection Z = CircleReflection::zero();
  const SectorKernels K(Z, 0.75);
  for (int j = 1; j <= 5; ++j) {
    CHECK(std::abs(K.delta(j, cplx(0.3, 1.7)) - 1.0) == 0.0);
    CHECK(std::abs(K.chi(j, cplx(0.3, 1.7), false)) == 0.0);
    CHECK(std::abs(K.chi(j, cplx(0.3, 1.7), true)) == 0.0);
  }
  CHECK(K.nu().nu1 == 0.0);
  CHECK(K.nu().nuhat1 == 0.0);
  CHECK(K.nu().nuhat2 == 0.0);
  CHECK(K.chi1_edge(cplx(0.2, 0.2), false) == 0.0);
}

TEST_CASE("delta jumps across the arcs") {
  const Fixture& f = fx();
  for (double zeta : {0.62, 0.75, 0.95}) {
    const SectorKernels K(f.C, zeta);
    for (int j = 1; j <= 5; ++j) {
      const auto& A = K.arc(j);
      for (double frac : {0.23, 0.5, 0.81}) {
        const double th = A.a + frac * (A.b - A.a);
        const cplx ratio = K.delta_side(j, th, Side::Plus) / K.delta_side(j, th, Side::Minus);
        CHECK(std::abs(ratio - std::exp(K.density(j, th))) < 1e-6);
      }
    }
    // density of delta_1 is the log of 1 + r1 r2 computed directly
    const auto& A1 = K.arc(1);
    const double th = 0.5 * (A1.a + A1.b);
    const cplx k = circle(th);
    CHECK(std::abs(std::exp(K.density(1, th)) - (1.0 + f.S.r1(k) * f.S.r2(k))) < 1e-8);
  }
}

TEST_CASE("boundary values are limits from either side") {
  const SectorKernels K(fx().C, 0.75);
  for (int j = 1; j <= 5; ++j) {
    const auto& A = K.arc(j);
    const double th = A.a + 0.37 * (A.b - A.a);
    const double d = std::min(th - A.a, A.b - th);
    auto lim = [&](double sgn) {
      cplx v[3];
      const double hs[3] = {1e-3 * d, 2e-3 * d, 4e-3 * d};
      for (int i = 0; i < 3; ++i) v[i] = K.delta(j, std::polar(1.0 + sgn * hs[i], th));
      return (8.0 * v[0] - 6.0 * v[1] + v[2]) / 3.0;
    };
    const cplx in = lim(-1.0), out = lim(1.0);
    const cplx p = K.delta_side(j, th, Side::Plus), m = K.delta_side(j, th, Side::Minus);
    CHECK(std::min(std::abs(in - p) + std::abs(out - m), std::abs(in - m) + std::abs(out - p)) < 1e-6);
  }
}

TEST_CASE("delta tends to one at infinity like 1/k") {
  const SectorKernels K(fx().C, 0.75);
  for (int j = 1; j <= 5; ++j) {
    const cplx k = 1e3 * circle(0.3);
    const double c1 = std::abs(K.delta(j, k) - 1.0) * std::abs(k);
    const double c2 = std::abs(K.delta(j, 2.0 * k) - 1.0) * std::abs(2.0 * k);
    CHECK(c1 > 0.0);
    CHECK(std::abs(c2 / c1 - 1.0) < 0.01);
  }
}

TEST_CASE("delta representation through nu and chi") {
  const SectorKernels K(fx().C, 0.75);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(0, 1);
  double ea = 0, eb = 0;
  for (int n = 0; n < 20; ++n) {
    const double r = U(rng) < 0.5 ? 0.5 + 0.4 * U(rng) : 1.1 + 0.9 * U(rng);
    const double ar = -3 * kPi / 4 + (3 * kPi / 8 + 3 * kPi / 4) * U(rng);
    const cplx k = std::polar(r, ar);
    for (int j = 1; j <= 5; ++j) {
      const cplx d = K.delta(j, k);
      ea = std::max(ea, std::abs(d - std::exp(K.log_delta_representation(j, k, false))));
      eb = std::max(eb, std::abs(d - std::exp(K.log_delta_representation(j, k, true))));
    }
  }
  CHECK(ea < 1e-8);
  CHECK(eb < 1e-8);
}

TEST_CASE("chi_1 is Hoelder continuous at omega k4") {
  const SectorKernels K(fx().C, 0.75);
  const cplx a = K.wk4();
  const cplx c0 = K.chi(1, a, false);
  const cplx dir = a * std::polar(1.0, kPi / 4.0);  // nontangential, outward
  double lo = 1e300, hi = 0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    const cplx k = a + eps * dir;
    const double r = std::abs(K.chi(1, k, false) - c0) / (eps * (1.0 + std::abs(std::log(eps))));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(std::isfinite(hi));
  CHECK(hi < 10.0 * std::max(lo, 1e-12) + 1e-6);
}

TEST_CASE("nu exponents") {
  const Fixture& f = fx();
  for (double zeta : {0.62, 0.75, 0.9}) {
    const SectorKernels K(f.C, zeta);
    const NuBundle& nu = K.nu();
    CHECK(nu.nuhat1 >= 0.0);
    CHECK(nu.nuhat2 >= 0.0);
    CHECK(nu.nuhat1 == doctest::Approx(nu.nu3 - nu.nu1));
    CHECK(std::abs(nu.nuhat2 - nu.nuhat2_pointwise) < 1e-10);
    // direct evaluation from r1, r2 at omega k4
    const cplx a = kOmega * K.saddles().k4;
    const cplx rr = 1.0 + f.S.r1(a) * f.S.r2(a);
    CHECK(std::abs(nu.nu1 + std::log(rr.real()) / (2.0 * kPi)) < 1e-8);
    CHECK(std::abs(rr.imag()) < 1e-8);
    const cplx a1 = 1.0 / (kOmega2 * a);
    const cplx fa = 1.0 + f.S.r1(a) * f.S.r2(a) + f.S.r1(a1) * f.S.r2(a1);
    CHECK(std::abs(nu.nu3 + std::log(fa.real()) / (2.0 * kPi)) < 1e-8);
    // jump modulus of delta_1 extrapolated to the arc end at omega k4
    const auto& A = K.arc(1);
    const double tha = K.theta_wk4();
    const bool at_b = std::abs(A.b - tha) < std::abs(A.a - tha);
    REQUIRE(std::min(std::abs(A.b - tha), std::abs(A.a - tha)) < 1e-12);
    auto g = [&](double d) {
      const double th = at_b ? tha - d : tha + d;
      return -std::log(std::abs(K.delta_side(1, th, Side::Plus) / K.delta_side(1, th, Side::Minus))) / (2.0 * kPi);
    };
    const double d = 1e-3;
    const double ext = (8.0 * g(d) - 6.0 * g(2 * d) + g(4 * d)) / 3.0;
    CHECK(std::abs(ext - nu.nu1) < 1e-8);
  }
}

TEST_CASE("regularized integrals converge under epsilon refinement") {
  const SectorKernels K(fx().C, 0.75);
  const cplx k = K.w2k2();
  for (int j = 4; j <= 5; ++j)
    for (bool t : {false, true}) {
      const RegularizedLimit R = chi_eps_limit(K, j, k, t, {1e-3, 1e-4, 1e-5, 1e-6});
      CHECK(std::abs(R.value - K.chi(j, k, t)) < 1e-6);
      CHECK(R.observed_order > 0.5);
    }
}
