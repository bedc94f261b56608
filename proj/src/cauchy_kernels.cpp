#include "bsq/cauchy_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bsq/numerics.hpp"

namespace bsq {

bool in_cap(cplx k, cplx p, cplx q) {
  if (std::abs(k) >= 1.0) return false;
  const cplx chord = q - p;
  const double side_k = (std::conj(chord) * (k - p)).imag();
  const double side_0 = (std::conj(chord) * (-p)).imag();
  return side_k * side_0 < 0.0;
}

double arc_sweep(cplx k, cplx p, cplx q) {
  return std::arg((q - k) / (p - k)) + (in_cap(k, p, q) ? 2.0 * kPi : 0.0);
}

cplx ln_branch(cplx k, cplx s) {
  double a = std::arg(k - kI);
  if (a <= 0.5 * kPi) a += 2.0 * kPi;
  const double sweep = (s == kI) ? 0.0 : arc_sweep(k, kI, s);
  return cplx(std::log(std::abs(k - s)), a + sweep);
}

cplx ln_tilde_branch(cplx k, cplx s) {
  const double sweep = (s == -1.0) ? 0.0 : arc_sweep(k, s, -1.0);
  return cplx(std::log(std::abs(k - s)), std::arg(k + 1.0) - sweep);
}

SectorKernels::SectorKernels(const CircleReflection& refl, double zeta, KernelOptions opt)
    : refl_(&refl), opt_(opt), zeta_(zeta), saddles_(saddle_points(zeta)) {
  wk4_ = kOmega * saddles_.k4;
  w2k2_ = kOmega2 * saddles_.k2;
  th4_ = std::arg(wk4_);
  th2_ = std::arg(w2k2_);
  if (!(0.5 * kPi < th4_ && th4_ < th2_ && th2_ < 2.0 * kPi / 3.0))
    throw DomainError("SectorKernels: saddle images out of order");
  const double tw = 2.0 * kPi / 3.0;
  arcs_ = {Arc{0.5 * kPi, th4_, 0, -1.0, false}, Arc{th4_, th2_, 0, 1.0, false}, Arc{th4_, th2_, 1, 1.0, false},
           Arc{th2_, tw, 1, 1.0, true}, Arc{th2_, tw, 2, 1.0, true}};
  for (int j = 4; j <= 5; ++j) {
    EndpointModel& m = models_[j - 1];
    if (refl.is_zero()) continue;
    const double eta = opt_.model_eta;
    Eigen::Matrix3d A;
    Eigen::Vector3d y;
    for (int i = 0; i < 3; ++i) {
      const double d = eta * std::ldexp(1.0, i);
      A(i, 0) = std::log(d);
      A(i, 1) = 1.0;
      A(i, 2) = d;
      y[i] = density_raw(j, tw - d);
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
    m.active = true;
    m.m = c[0];
    m.g0 = c[1];
    m.g1 = c[2];
  }
  auto lg = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::runtime_error(std::string("positivity violated: ") + what + " <= 0");
    return std::log(v);
  };
  nu_.zeta = zeta;
  if (!refl.is_zero()) {
    nu_.nu1 = -lg(refl.one_plus_r1r2(th4_), "1 + r1 r2 at omega k4") / (2.0 * kPi);
    nu_.nu2 = -lg(refl.one_plus_r1r2(th2_), "1 + r1 r2 at omega^2 k2") / (2.0 * kPi);
    nu_.nu3 = -lg(refl.f(th4_), "f at omega k4") / (2.0 * kPi);
    nu_.nu4 = -lg(refl.f(th2_), "f at omega^2 k2") / (2.0 * kPi);
    nu_.nu5 = -lg(refl.f(th2_ + 4.0 * kPi / 3.0), "f at omega k2") / (2.0 * kPi);
    const double nu3_k2 = -lg(refl.f(std::arg(kOmega * saddles_.k2)), "f at omega k2") / (2.0 * kPi);
    nu_.nuhat2_pointwise = nu_.nu2 + nu3_k2 - nu_.nu4;
  }
  nu_.nuhat1 = nu_.nu3 - nu_.nu1;
  nu_.nuhat2 = nu_.nu2 + nu_.nu5 - nu_.nu4;
}

double SectorKernels::density_raw(int j, double theta) const {
  if (refl_->is_zero()) return 0.0;
  switch (arcs_.at(j - 1).density) {
    case 0: return std::log(refl_->one_plus_r1r2(theta));
    case 1: return std::log(refl_->f(theta));
    default: return std::log(refl_->f(theta + 4.0 * kPi / 3.0));
  }
}

double SectorKernels::density(int j, double theta) const {
  const Arc& a = arcs_.at(j - 1);
  const EndpointModel& m = models_.at(j - 1);
  if (a.singular_end && m.active) {
    const double d = a.b - theta;
    if (d < opt_.model_eta) return m.m * std::log(d) + m.g0 + m.g1 * d;
  }
  return density_raw(j, theta);
}

double SectorKernels::density_deriv(int j, double theta) const {
  if (refl_->is_zero()) return 0.0;
  const Arc& a = arcs_.at(j - 1);
  const EndpointModel& m = models_.at(j - 1);
  if (a.singular_end && m.active) {
    const double d = a.b - theta;
    if (d < opt_.model_eta) return -(m.m / d + m.g1);
  }
  switch (a.density) {
    case 0: return refl_->one_plus_r1r2_deriv(theta) / refl_->one_plus_r1r2(theta);
    case 1: return refl_->f_deriv(theta) / refl_->f(theta);
    default: {
      const double t = theta + 4.0 * kPi / 3.0;
      return refl_->f_deriv(t) / refl_->f(t);
    }
  }
}

cplx SectorKernels::integrate(double a, double b, const Integrand& g, const std::vector<double>& sing,
                              cplx k_near, bool use_k) const {
  const QuadRule& gl = gauss_legendre(opt_.gauss);
  const double mid = 0.5 * (a + b);
  double thk = 0.0;
  if (use_k) thk = mid + std::remainder(std::arg(k_near) - mid, 2.0 * kPi);
  auto dist = [&](double p, double q) {
    double d = std::numeric_limits<double>::infinity();
    for (double s : sing) d = std::min(d, s < p ? p - s : (s > q ? s - q : 0.0));
    if (use_k) {
      const double tc = std::clamp(thk, p, q);
      d = std::min(d, std::abs(k_near - std::polar(1.0, tc)));
    }
    return d;
  };
  cplx total = 0.0;
  std::function<void(double, double, int)> rec = [&](double p, double q, int depth) {
    const double len = q - p;
    if (len > opt_.split_ratio * dist(p, q) && len > opt_.floor && depth < 200) {
      const double m = 0.5 * (p + q);
      rec(p, m, depth + 1);
      rec(m, q, depth + 1);
      return;
    }
    cplx s = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * g(0.5 * (p + q) + 0.5 * len * gl.x[i]);
    total += 0.5 * len * s;
  };
  // Singular points become breakpoints so no node lands on them.
  std::vector<double> br;
  const int n = opt_.base_panels;
  for (int i = 0; i <= n; ++i) br.push_back(a + (b - a) * i / n);
  for (double s : sing)
    if (s > a && s < b) br.push_back(s);
  if (use_k) {
    const double tk = std::clamp(thk, a, b);
    if (std::abs(k_near - std::polar(1.0, tk)) < 1e-13 && tk > a && tk < b) br.push_back(tk);
  }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    if (br[i + 1] - br[i] > 0.0) rec(br[i], br[i + 1], 0);
  return total;
}

cplx SectorKernels::log_delta(int j, cplx k) const {
  if (refl_->is_zero()) return 0.0;
  const Arc& A = arcs_.at(j - 1);
  const double mid = 0.5 * (A.a + A.b);
  const double tk = std::clamp(mid + std::remainder(std::arg(k) - mid, 2.0 * kPi), A.a, A.b);
  if (std::abs(k - std::polar(1.0, tk)) < opt_.arc_tol)
    throw DomainError("delta: k on the arc; a boundary side must be specified");
  std::vector<double> sing;
  if (A.singular_end) sing.push_back(A.b);
  const cplx I = integrate(
      A.a, A.b,
      [&](double th) {
        const cplx s = std::polar(1.0, th);
        return density(j, th) * kI * s / (s - k);
      },
      sing, k, true);
  return A.sign * I / (2.0 * kPi * kI);
}

cplx SectorKernels::log_delta_side(int j, double theta, Side side) const {
  if (refl_->is_zero()) return 0.0;
  const Arc& A = arcs_.at(j - 1);
  if (!(A.a < theta && theta < A.b)) throw DomainError("delta_side: theta not interior to the arc");
  const cplx k0 = std::polar(1.0, theta);
  const double F0 = density(j, theta);
  std::vector<double> sing{theta};
  if (A.singular_end) sing.push_back(A.b);
  const cplx I = integrate(
      A.a, A.b,
      [&](double th) {
        const cplx s = std::polar(1.0, th);
        return (density(j, th) - F0) * kI * s / (s - k0);
      },
      sing, k0, false);
  const cplx a = std::polar(1.0, A.a), b = std::polar(1.0, A.b);
  const cplx pv = I + F0 * cplx(std::log(std::abs(b - k0) / std::abs(a - k0)), 0.5 * (A.b - A.a));
  const double half = 0.5 * F0 * (side == Side::Plus ? 1.0 : -1.0);
  return A.sign * pv / (2.0 * kPi * kI) + half;
}

cplx SectorKernels::chi(int j, cplx k, bool tilde) const {
  if (refl_->is_zero()) return 0.0;
  const Arc& A = arcs_.at(j - 1);
  std::vector<double> sing;
  if (!A.singular_end) {
    const cplx I = integrate(
        A.a, A.b, [&](double th) { return kernel(k, std::polar(1.0, th), tilde) * density_deriv(j, th); }, sing, k,
        true);
    return A.sign * I / (2.0 * kPi * kI);
  }
  sing.push_back(A.b);
  const cplx Kb = kernel(k, std::polar(1.0, A.b), tilde);
  const cplx I = integrate(
      A.a, A.b, [&](double th) { return (kernel(k, std::polar(1.0, th), tilde) - Kb) * density_deriv(j, th); },
      sing, k, true);
  return A.sign * (I - Kb * density(j, A.a)) / (2.0 * kPi * kI);
}

cplx SectorKernels::chi_eps(int j, cplx k, double eps, bool tilde) const {
  const Arc& A = arcs_.at(j - 1);
  if (!A.singular_end) throw DomainError("chi_eps: only the regularized integrals take epsilon");
  if (refl_->is_zero()) return 0.0;
  const double b = A.b - eps;
  std::vector<double> sing{A.b};
  const cplx I = integrate(
      A.a, b, [&](double th) { return kernel(k, std::polar(1.0, th), tilde) * density_deriv(j, th); }, sing, k,
      true);
  const cplx Kb = kernel(k, std::polar(1.0, A.b), tilde);
  return A.sign * (I - Kb * density(j, b)) / (2.0 * kPi * kI);
}

double SectorKernels::nu_endpoint(int j, bool at_b) const {
  const Arc& A = arcs_.at(j - 1);
  return -density(j, at_b ? A.b : A.a) / (2.0 * kPi);
}

cplx SectorKernels::chi1_edge(cplx k, bool tilde) const {
  if (refl_->is_zero()) return 0.0;
  return density(1, 0.5 * kPi) * kernel(k, kI, tilde) / (2.0 * kPi * kI);
}

cplx SectorKernels::log_delta_representation(int j, cplx k, bool tilde) const {
  if (refl_->is_zero()) return 0.0;
  const cplx L4 = kernel(k, wk4_, tilde), L2 = kernel(k, w2k2_, tilde);
  switch (j) {
    case 1: {
      const double nu1 = nu_endpoint(1, true);
      return -kI * nu1 * L4 - chi(1, k, tilde) + chi1_edge(k, tilde);
    }
    case 2: return -kI * nu_endpoint(2, false) * L4 + kI * nu_endpoint(2, true) * L2 - chi(2, k, tilde);
    case 3: return -kI * nu_endpoint(3, false) * L4 + kI * nu_endpoint(3, true) * L2 - chi(3, k, tilde);
    case 4: return -kI * nu_endpoint(4, false) * L2 - chi(4, k, tilde);
    case 5: return -kI * nu_endpoint(5, false) * L2 - chi(5, k, tilde);
    default: throw DomainError("log_delta_representation: j out of range");
  }
}

RegularizedLimit chi_eps_limit(const SectorKernels& sk, int j, cplx k, bool tilde, const std::vector<double>& eps,
                               bool relative) {
  if (eps.size() < 2) throw std::invalid_argument("chi_eps_limit: need at least two epsilons");
  RegularizedLimit out;
  const double scale = relative ? sk.arc(j).b - sk.arc(j).a : 1.0;
  for (double e : eps) {
    out.eps.push_back(e * scale);
    out.samples.push_back(sk.chi_eps(j, k, e * scale, tilde));
  }
  const std::size_t n = eps.size();
  std::vector<cplx> v = out.samples;
  for (std::size_t lvl = 1; lvl < n; ++lvl)
    for (std::size_t m = 0; m + lvl < n; ++m)
      v[m] = (out.eps[m + lvl] * v[m] - out.eps[m] * v[m + 1]) / (out.eps[m + lvl] - out.eps[m]);
  out.value = v[0];
  if (n >= 3) {
    const double d1 = std::abs(out.samples[n - 3] - out.samples[n - 2]);
    const double d2 = std::abs(out.samples[n - 2] - out.samples[n - 1]);
    out.observed_order = (d1 > 0 && d2 > 0) ? std::log(d1 / d2) / std::log(out.eps[n - 3] / out.eps[n - 2]) : 0.0;
    if (!(out.observed_order > 0.5)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "chi_eps_limit: epsilon sequence not converging (last values %.6g, %.6g, %.6g)",
                    std::abs(out.samples[n - 3]), std::abs(out.samples[n - 2]), std::abs(out.samples[n - 1]));
      throw std::runtime_error(buf);
    }
  }
  return out;
}

}  // namespace bsq
