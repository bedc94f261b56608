#include "bsq/direct_scattering.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bsq/numerics.hpp"

namespace bsq {

namespace {

const double kC[3] = {0.5 - std::sqrt(15.0) / 10.0, 0.5, 0.5 + std::sqrt(15.0) / 10.0};

Mat3 comm(const Mat3& a, const Mat3& b) { return a * b - b * a; }

// Sixth-order Magnus exponent from the generator at the three Gauss nodes.
Mat3 magnus6(const Mat3& A1, const Mat3& A2, const Mat3& A3, double hs) {
  const Mat3 a1 = hs * A2;
  const Mat3 a2 = (std::sqrt(15.0) * hs / 3.0) * (A3 - A1);
  const Mat3 a3 = (10.0 * hs / 3.0) * (A3 - 2.0 * A2 + A1);
  const Mat3 c1 = comm(a1, a2);
  const Mat3 c2 = (-1.0 / 60.0) * comm(a1, 2.0 * a3 + c1);
  return a1 + a3 / 12.0 + (1.0 / 240.0) * comm(-20.0 * a1 - a3 + c1, a2 + c2);
}

Mat3 cofactor(const Mat3& s) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      c(i, j) = s(i1, j1) * s(i2, j2) - s(i1, j2) * s(i2, j1);
    }
  return c;
}

cplx m31_of(const DataSample& s) { return cplx(-s.u0x / 4.0, -s.v0 / (4.0 * kSqrt3)); }
cplx m32_of(const DataSample& s) { return cplx(-s.u0 / 2.0, 0.0); }

struct DiagFrame {
  std::array<cplx, 3> l;
  std::array<cplx, 3> a;
  explicit DiagFrame(cplx k) {
    const PhaseTriple p = phase_values(k);
    l = p.l;
    for (int i = 0; i < 3; ++i) {
      cplx d = 1.0;
      for (int m = 0; m < 3; ++m)
        if (m != i) d *= (l[i] - l[m]);
      a[i] = 1.0 / d;
    }
  }
  // e^{-x ad L} U(x).
  Mat3 gen(double x, cplx m31, cplx m32) const {
    std::array<cplx, 3> em, ep;
    for (int i = 0; i < 3; ++i) {
      em[i] = std::exp(-x * l[i]);
      ep[i] = std::exp(x * l[i]);
    }
    Mat3 U;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) U(i, j) = em[i] * ep[j] * a[i] * (m31 + m32 * l[j]);
    return U;
  }
};

}  // namespace

Mat3 vandermonde_P(cplx k) {
  const PhaseTriple p = phase_values(k);
  Mat3 P;
  for (int j = 0; j < 3; ++j) {
    P(0, j) = 1.0;
    P(1, j) = p.l[j];
    P(2, j) = p.l[j] * p.l[j];
  }
  return P;
}

Mat3 companion_A0(cplx k) {
  if (k == 0.0) throw DomainError("companion_A0: k = 0");
  const cplx c = (k * k * k + 1.0 / (k * k * k)) / (24.0 * kSqrt3 * kI);
  Mat3 A = Mat3::Zero();
  A(0, 1) = 1.0;
  A(1, 2) = 1.0;
  A(2, 0) = c;
  A(2, 1) = -0.25;
  return A;
}

Mat3 potential_middle(const DataSample& s) {
  Mat3 M = Mat3::Zero();
  M(2, 0) = m31_of(s);
  M(2, 1) = m32_of(s);
  return M;
}

Mat3 build_potential(const DataSample& s, cplx k) {
  if (distance_to_Q(k) < 1e-8) throw DomainError("build_potential: P(k) degenerate near a sixth root of unity");
  const Mat3 P = vandermonde_P(k);
  return P.partialPivLu().solve(potential_middle(s) * P);
}

cplx r_tilde(cplx k) { return (kOmega2 - k * k) / (1.0 - kOmega2 * k * k); }

ScatteringSolver::ScatteringSolver(const InitialData& data, SolverOptions opt) : data_(data), opt_(opt) {
  const double L = data.L();
  const int n = std::max(1, static_cast<int>(std::ceil(2.0 * L / opt_.step)));
  h_ = 2.0 * L / n;
  steps_.resize(n);
  for (int s = 0; s < n; ++s) {
    Step& st = steps_[s];
    st.x0 = L - s * h_;
    for (int i = 0; i < 3; ++i) {
      const DataSample d = data.eval(st.x0 - kC[i] * h_);
      st.m31[i] = m31_of(d);
      st.m32[i] = m32_of(d);
    }
  }
}

Frame ScatteringSolver::pick(cplx k) const {
  if (opt_.frame != Frame::Auto) return opt_.frame;
  return std::abs(std::abs(k) - 1.0) <= 1e-3 ? Frame::Companion : Frame::Diagonal;
}

Mat3 ScatteringSolver::march_diagonal(cplx k, bool adjoint) const {
  const DiagFrame fr(k);
  const double hs = -h_;
  Mat3 E = Mat3::Identity();
  if (data_.is_zero()) return E;
  for (const Step& st : steps_) {
    Mat3 A[3];
    for (int i = 0; i < 3; ++i) {
      A[i] = fr.gen(st.x0 + kC[i] * hs, st.m31[i], st.m32[i]);
      if (adjoint) A[i] = -A[i].transpose().eval();
    }
    E = expm3(magnus6(A[0], A[1], A[2], hs)) * E;
  }
  return E;
}

Mat3 ScatteringSolver::march_companion(cplx k) const {
  const Mat3 A0 = companion_A0(k);
  const double hs = -h_;
  Mat3 Q = Mat3::Identity();
  if (data_.is_zero()) return Q;
  const Mat3 G = expm3(hs * A0), Gi = expm3(-hs * A0);
  Mat3 Ec[3], Eci[3];
  for (int i = 0; i < 3; ++i) {
    Ec[i] = expm3(kC[i] * hs * A0);
    Eci[i] = expm3(-kC[i] * hs * A0);
  }
  Mat3 Ep, Em;
  for (std::size_t s = 0; s < steps_.size(); ++s) {
    const Step& st = steps_[s];
    if (s % 64 == 0) {
      Ep = expm3(st.x0 * A0);
      Em = expm3(-st.x0 * A0);
    }
    Mat3 A[3];
    const Vec3 pcol = Em.col(2);
    for (int i = 0; i < 3; ++i) {
      const Vec3 p = Eci[i] * pcol;
      const Eigen::RowVector3cd q = (st.m31[i] * Ep.row(0) + st.m32[i] * Ep.row(1)) * Ec[i];
      A[i] = p * q;
    }
    Q = expm3(magnus6(A[0], A[1], A[2], hs)) * Q;
    Ep = Ep * G;
    Em = Gi * Em;
  }
  return Q;
}

ScatteringMatrix ScatteringSolver::scattering(cplx k) const {
  if (k == 0.0) throw DomainError("scattering: k = 0");
  if (distance_to_Q(k) < opt_.degenerate_tol) throw DomainError("scattering: k degenerate (sixth root of unity)");
  ScatteringMatrix out;
  out.k = k;
  if (pick(k) == Frame::Companion) {
    const Mat3 Q = march_companion(k);
    const Mat3 P = vandermonde_P(k);
    const auto lu = P.partialPivLu();
    out.s = Mat3::Identity() + lu.solve((Q - Mat3::Identity()) * P);
    const Mat3 adjQ = cofactor(Q).transpose();
    out.sA = (Mat3::Identity() + lu.solve((adjQ - Mat3::Identity()) * P)).transpose();
  } else {
    out.s = march_diagonal(k, false);
    out.sA = cofactor(out.s);
  }
  return out;
}

Mat3 ScatteringSolver::sA_adjoint(cplx k) const {
  if (distance_to_Q(k) < opt_.degenerate_tol) throw DomainError("sA_adjoint: k degenerate");
  return march_diagonal(k, true);
}

std::vector<Mat3> ScatteringSolver::solve_X(cplx k, const std::vector<double>& xs) const {
  const DiagFrame fr(k);
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
  std::vector<Mat3> out(xs.size(), Mat3::Identity());
  auto to_X = [&](const Mat3& E, double x) {
    Mat3 X;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) X(i, j) = std::exp(x * (fr.l[i] - fr.l[j])) * E(i, j);
    return X;
  };
  auto partial = [&](double from, double to, const Mat3& E) {
    const double hs = to - from;
    Mat3 A[3];
    for (int i = 0; i < 3; ++i) {
      const double x = from + kC[i] * hs;
      const DataSample d = data_.eval(x);
      A[i] = fr.gen(x, m31_of(d), m32_of(d));
    }
    return Mat3(expm3(magnus6(A[0], A[1], A[2], hs)) * E);
  };
  const double L = data_.L();
  std::size_t t = 0;
  while (t < order.size() && xs[order[t]] >= L) {
    out[order[t]] = Mat3::Identity();
    ++t;
  }
  Mat3 E = Mat3::Identity();
  const double hs = -h_;
  for (std::size_t s = 0; s < steps_.size() && t < order.size(); ++s) {
    const Step& st = steps_[s];
    const double xlo = st.x0 + hs;
    while (t < order.size() && xs[order[t]] > xlo) {
      const double xt = xs[order[t]];
      out[order[t]] = to_X(xt == st.x0 ? E : partial(st.x0, xt, E), xt);
      ++t;
    }
    Mat3 A[3];
    for (int i = 0; i < 3; ++i) A[i] = fr.gen(st.x0 + kC[i] * hs, st.m31[i], st.m32[i]);
    E = expm3(magnus6(A[0], A[1], A[2], hs)) * E;
  }
  // Left of the support X = e^{x ad L} s.
  for (; t < order.size(); ++t) out[order[t]] = to_X(E, xs[order[t]]);
  return out;
}

cplx ScatteringSolver::r1(cplx k) const {
  const ScatteringMatrix m = scattering(k);
  return m.s(0, 1) / m.s(0, 0);
}

cplx ScatteringSolver::r2(cplx k) const {
  const ScatteringMatrix m = scattering(k);
  return m.sA(0, 1) / m.sA(0, 0);
}

double ReflectionData::max_circle_residual() const {
  double m = 0;
  for (const auto& s : samples)
    if (s.valid) m = std::max(m, s.circle_residual);
  return m;
}

double ReflectionData::max_conj_residual() const {
  double m = 0;
  for (const auto& s : samples)
    if (s.valid) m = std::max(m, s.conj_residual);
  return m;
}

ReflectionData reflection_coefficients(const ScatteringSolver& solver, int per_arc, double exclusion,
                                       bool with_residuals) {
  ReflectionData out;
  // Angular exclusion equivalent to a chord distance.
  const double dth = 2.0 * std::asin(std::min(1.0, exclusion / 2.0));
  for (int arc = 0; arc < 6; ++arc) {
    const double a = arc * kPi / 3.0 + dth, b = (arc + 1) * kPi / 3.0 - dth;
    for (int i = 0; i < per_arc; ++i) {
      ReflectionSample rs;
      rs.arc = arc;
      rs.theta = a + (b - a) * (i + 0.5) / per_arc;
      rs.k = std::polar(1.0, rs.theta);
      try {
        const ScatteringMatrix m = solver.scattering(rs.k);
        rs.r1 = m.s(0, 1) / m.s(0, 0);
        rs.r2 = m.sA(0, 1) / m.sA(0, 0);
        if (with_residuals) {
          const cplx k = rs.k;
          const cplx a1 = solver.r1(1.0 / (kOmega * k));
          const cplx a2 = solver.r2(kOmega * k);
          const cplx a3 = solver.r1(kOmega2 * k);
          const cplx a4 = solver.r2(1.0 / k);
          rs.circle_residual = std::abs(a1 + a2 + a3 * a4);
          rs.conj_residual = std::abs(rs.r2 - r_tilde(k) * std::conj(rs.r1));
        }
        rs.valid = std::isfinite(std::abs(rs.r1)) && std::isfinite(std::abs(rs.r2));
      } catch (const DomainError&) {
        rs.valid = false;
      }
      out.samples.push_back(rs);
    }
  }
  return out;
}

EndpointLimits endpoint_limits(const ScatteringSolver& solver, double eps) {
  auto extrap = [&](double th0, double dir, bool second) {
    // Cubic Neville extrapolation to zero offset.
    double t[4];
    cplx v[4];
    for (int m = 0; m < 4; ++m) {
      t[m] = eps * std::ldexp(1.0, m);
      const cplx k = std::polar(1.0, th0 + dir * t[m]);
      v[m] = second ? solver.r2(k) : solver.r1(k);
    }
    for (int lvl = 1; lvl < 4; ++lvl)
      for (int m = 0; m + lvl < 4; ++m) v[m] = (t[m + lvl] * v[m] - t[m] * v[m + 1]) / (t[m + lvl] - t[m]);
    return v[0];
  };
  EndpointLimits e;
  e.r1_plus = extrap(0.0, 1.0, false);
  e.r2_plus = extrap(0.0, 1.0, true);
  e.r1_minus = extrap(kPi, 1.0, false);
  e.r2_minus = extrap(kPi, 1.0, true);
  return e;
}

CircleReflection CircleReflection::zero() { return CircleReflection(); }

CircleReflection::CircleReflection(const ScatteringSolver& solver, int nodes, double tol, int max_depth) {
  zero_ = solver.data().is_zero();
  const QuadRule& ch = chebyshev_fejer(nodes);
  std::function<void(double, double, int)> build = [&](double a, double b, int depth) {
    Eigen::VectorXcd v(nodes);
    for (int j = 0; j < nodes; ++j) {
      const double th = 0.5 * (a + b) + 0.5 * (b - a) * ch.x[j];
      v[j] = zero_ ? cplx(0.0) : solver.r1(std::polar(1.0, th));
    }
    Eigen::VectorXcd c = chebyshev_coeffs(v);
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    const double tail = std::max({std::abs(c[nodes - 1]), std::abs(c[nodes - 2]), std::abs(c[nodes - 3])});
    if (tail <= tol * scale || depth >= max_depth) {
      panels_.push_back({a, b, c, chebyshev_deriv_coeffs(c)});
      return;
    }
    const double m = 0.5 * (a + b);
    build(a, m, depth + 1);
    build(m, b, depth + 1);
  };
  for (int arc = 0; arc < 6; ++arc) build(arc * kPi / 3.0, (arc + 1) * kPi / 3.0, 0);
}

const CircleReflection::Panel& CircleReflection::find(double theta) const {
  auto it = std::upper_bound(panels_.begin(), panels_.end(), theta,
                             [](double t, const Panel& p) { return t < p.b; });
  if (it == panels_.end()) --it;
  return *it;
}

cplx CircleReflection::r1(double theta) const {
  if (zero_ || panels_.empty()) return 0.0;
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0) theta += 2.0 * kPi;
  const Panel& p = find(theta);
  const double t = (2.0 * theta - p.a - p.b) / (p.b - p.a);
  return chebyshev_eval(p.c, std::clamp(t, -1.0, 1.0));
}

cplx CircleReflection::r1_deriv(double theta) const {
  if (zero_ || panels_.empty()) return 0.0;
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0) theta += 2.0 * kPi;
  const Panel& p = find(theta);
  const double t = (2.0 * theta - p.a - p.b) / (p.b - p.a);
  return chebyshev_eval(p.dc, std::clamp(t, -1.0, 1.0)) * (2.0 / (p.b - p.a));
}

cplx CircleReflection::r2(double theta) const {
  return r_tilde(std::polar(1.0, theta)) * std::conj(r1(theta));
}

double CircleReflection::one_plus_r1r2(double theta) const {
  const cplx r = r1(theta);
  return 1.0 + r_tilde(std::polar(1.0, theta)).real() * std::norm(r);
}

double CircleReflection::one_plus_r1r2_deriv(double theta) const {
  const cplx k = std::polar(1.0, theta);
  const cplx r = r1(theta), dr = r1_deriv(theta);
  const cplx den = 1.0 - kOmega2 * k * k;
  // d r~/dk times dk/dtheta = i k.
  const cplx drt = (-2.0 * k * den + 2.0 * kOmega2 * k * (kOmega2 - k * k)) / (den * den) * (kI * k);
  return drt.real() * std::norm(r) + r_tilde(k).real() * 2.0 * (std::conj(r) * dr).real();
}

double CircleReflection::f_deriv(double theta) const {
  return one_plus_r1r2_deriv(theta) - one_plus_r1r2_deriv(2.0 * kPi / 3.0 - theta);
}

double CircleReflection::f(double theta) const {
  // 1/(w^2 e^{i theta}) = e^{i(2pi/3 - theta)}.
  return one_plus_r1r2(theta) + one_plus_r1r2(2.0 * kPi / 3.0 - theta) - 1.0;
}

cplx s11_stable(const ScatteringSolver& solver, cplx k) {
  SolverOptions o = solver.options();
  o.frame = Frame::Diagonal;
  ScatteringSolver diag(solver.data(), o);
  return diag.scattering(k).s(0, 0);
}

namespace {

struct ZeroSearch {
  std::function<cplx(cplx)> f;
  // Winding number of f around the rectangle boundary, adaptive in arg steps.
  int winding(const SearchBox& b) const {
    const cplx c[4] = {{b.re_lo, b.im_lo}, {b.re_hi, b.im_lo}, {b.re_hi, b.im_hi}, {b.re_lo, b.im_hi}};
    double total = 0.0;
    for (int e = 0; e < 4; ++e) {
      const cplx p = c[e], q = c[(e + 1) % 4];
      std::function<double(double, double, cplx, cplx, int)> seg = [&](double t0, double t1, cplx f0, cplx f1,
                                                                        int depth) -> double {
        const double d = std::arg(f1 / f0);
        if (std::abs(d) < kPi / 6.0) return d;
        if (depth > 20) throw std::runtime_error("find_s11_zeros: zero on or too close to the search contour");
        const double tm = 0.5 * (t0 + t1);
        const cplx fm = f(p + (q - p) * tm);
        return seg(t0, tm, f0, fm, depth + 1) + seg(tm, t1, fm, f1, depth + 1);
      };
      // Start with a coarse sampling of the edge.
      const int n0 = 16;
      cplx fprev = f(p);
      for (int i = 1; i <= n0; ++i) {
        const double t0 = double(i - 1) / n0, t1 = double(i) / n0;
        const cplx fn = f(p + (q - p) * t1);
        total += seg(t0, t1, fprev, fn, 0);
        fprev = fn;
      }
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
  }
};

}  // namespace

std::vector<cplx> find_s11_zeros(const ScatteringSolver& solver, const SearchBox& box, double tol) {
  if (solver.data().is_zero()) return {};
  SolverOptions o = solver.options();
  o.frame = Frame::Diagonal;
  ScatteringSolver diag(solver.data(), o);
  ZeroSearch zs{[&](cplx k) { return diag.scattering(k).s(0, 0); }};
  o.step = std::min(o.step, o.polish_step);
  ScatteringSolver fine(solver.data(), o);
  auto ffine = [&](cplx k) { return fine.scattering(k).s(0, 0); };
  std::vector<cplx> zeros;
  std::function<void(const SearchBox&, int, int)> rec = [&](const SearchBox& b, int count, int depth) {
    if (count == 0) return;
    const double w = b.re_hi - b.re_lo, h = b.im_hi - b.im_lo;
    if (count == 1 && std::max(w, h) < 0.05) {
      cplx k(0.5 * (b.re_lo + b.re_hi), 0.5 * (b.im_lo + b.im_hi));
      for (int it = 0; it < 60; ++it) {
        const double dh = 1e-6;
        const cplx fk = ffine(k);
        const cplx df = (ffine(k + dh) - ffine(k - dh)) / (2.0 * dh);
        const cplx dk = fk / df;
        k -= dk;
        if (std::abs(dk) < tol * std::max(1.0, std::abs(k))) break;
      }
      if (k.real() < b.re_lo - w || k.real() > b.re_hi + w || k.imag() < b.im_lo - h || k.imag() > b.im_hi + h)
        throw std::runtime_error("find_s11_zeros: Newton left its box (unresolved zero cluster)");
      if (std::abs(k.imag()) < 1e-9) k = cplx(k.real(), 0.0);
      zeros.push_back(k);
      return;
    }
    if (depth > 20) throw std::runtime_error("find_s11_zeros: unresolved zero cluster");
    // Off-center split keeps real zeros off the cut lines.
    const double xm = b.re_lo + 0.4871 * w, ym = b.im_lo + 0.5213 * h;
    const SearchBox kids[4] = {{b.re_lo, xm, b.im_lo, ym}, {xm, b.re_hi, b.im_lo, ym},
                               {b.re_lo, xm, ym, b.im_hi}, {xm, b.re_hi, ym, b.im_hi}};
    int cs[4], sum = 0;
    for (int i = 0; i < 4; ++i) sum += (cs[i] = zs.winding(kids[i]));
    if (sum != count) throw std::runtime_error("find_s11_zeros: winding count mismatch (unresolved zero cluster)");
    for (int i = 0; i < 4; ++i) rec(kids[i], cs[i], depth + 1);
  };
  const int n = zs.winding(box);
  if (n < 0) throw std::runtime_error("find_s11_zeros: negative winding (pole inside search box)");
  rec(box, n, 0);
  std::sort(zeros.begin(), zeros.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  return zeros;
}

std::vector<SearchBox> default_search_boxes() {
  return {{1.02, 4.0, -0.49, 0.51}, {-0.95, -0.52, -0.26, 0.25}};
}

cplx d_from_c(cplx k0, cplx c) {
  const cplx kb = std::conj(k0);
  return (kb * kb - 1.0) / (kOmega2 * (kOmega2 - kb * kb)) * std::conj(c);
}

cplx nonsingularity_value(cplx k0, cplx c) { return kI * (kOmega2 * k0 * k0 - kOmega) * c; }

SolitonData residue_constants(const ScatteringSolver& solver, const std::vector<cplx>& zeros) {
  SolverOptions o = solver.options();
  o.frame = Frame::Diagonal;
  o.step = std::min(o.step, o.polish_step);
  ScatteringSolver diag(solver.data(), o);
  SolitonData out;
  for (cplx k0 : zeros) {
    const bool real = std::abs(k0.imag()) < 1e-12;
    const double dh = 1e-6 * std::max(1.0, std::abs(k0));
    const cplx sdot = (diag.scattering(k0 + dh).s(0, 0) - diag.scattering(k0 - dh).s(0, 0)) / (2.0 * dh);
    if (std::abs(sdot) < 1e-10) throw std::runtime_error("residue_constants: non-simple zero");
    const Mat3 s = diag.scattering(k0).s;
    if (auto z = residue_from_row(real ? cplx(k0.real(), 0.0) : k0, sdot, s(0, 1), s(0, 2))) out.zeros.push_back(*z);
  }
  return out;
}

std::optional<SolitonZero> residue_from_row(cplx k0, cplx sdot, cplx s12, cplx s13) {
  const bool real = k0.imag() == 0.0;
  SolitonZero z;
  z.k0 = k0;
  z.s11_dot = sdot;
  z.c = real ? -s12 / sdot : -s13 / sdot;
  if (std::abs(z.c) == 0.0) return std::nullopt;  // removable
  if (!real) z.d = d_from_c(k0, z.c);
  return z;
}

ValidationReport assumption_validators(const ScatteringSolver& solver, const SolitonData& solitons,
                                       ValidatorOptions opt) {
  ValidationReport rep;
  const InitialData& d = solver.data();
  rep.mass = d.mass_u1();
  rep.mass_ok = std::abs(rep.mass) <= opt.mass_tol;
  if (!rep.mass_ok) {
    rep.notes.push_back("mass condition violated: integral of u1 is nonzero");
    return rep;
  }
  if (d.is_zero()) return rep;
  // (iii) r1 on the segment (0, i].
  for (int i = 1; i <= opt.segment_samples; ++i) {
    const double y = static_cast<double>(i) / opt.segment_samples;
    const cplx k(0.0, y);
    const Mat3 s = solver.scattering(k).s;
    rep.sup_r1_on_segment = std::max(rep.sup_r1_on_segment, std::abs(s(0, 1) / s(0, 0)));
  }
  rep.no_high_modes = rep.sup_r1_on_segment <= opt.high_mode_tol;
  if (!rep.no_high_modes) rep.notes.push_back("r1 not negligible on [0, i]: high-frequency content present");
  // (ii) scaled entries near +-1 (heuristic floor).
  for (double ks : {1.0, -1.0}) {
    const double eps = 1e-4;
    const cplx k = ks * std::polar(1.0, eps);
    const ScatteringMatrix m = solver.scattering(k);
    const cplx dk = k - ks;
    const double probes[8] = {std::abs(dk * m.s(0, 0)),  std::abs(dk * m.s(0, 2)),  std::abs(m.s(2, 0)),
                              std::abs(m.s(2, 2)),       std::abs(dk * m.sA(0, 0)), std::abs(dk * m.sA(2, 0)),
                              std::abs(m.sA(0, 2)),      std::abs(m.sA(2, 2))};
    for (double p : probes) {
      rep.generic_probes.push_back(p);
      if (!(p > opt.generic_floor)) rep.generic_at_pm1 = false;
    }
  }
  if (!rep.generic_at_pm1) rep.notes.push_back("non-generic behaviour near k = +-1 (heuristic floor)");
  // (i) zeros in D_reg, (-1, 0) or (1, inf).
  for (const auto& z : solitons.zeros) {
    const cplx k = z.k0;
    const bool real = k.imag() == 0.0;
    const bool ok = real ? ((k.real() > -1 && k.real() < 0) || k.real() > 1) : in_D_reg(k);
    if (!ok) rep.zeros_in_regions = false;
    if (real) {
      const cplx v = nonsingularity_value(k, z.c);
      if (std::abs(v.imag()) <= 1e-12 * std::abs(v) && v.real() <= 0) rep.zeros_in_regions = false;
    }
  }
  if (!rep.zeros_in_regions) rep.notes.push_back("soliton zero outside admissible set or singular");
  return rep;
}

}  // namespace bsq
