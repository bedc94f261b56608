#include "bsq/pde_reference.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

#include "bsq/spectral_core.hpp"

namespace bsq {

namespace {

using cvec = std::vector<std::complex<double>>;

// FFTW planning is not thread safe.
std::mutex g_plan_mu;

class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    std::lock_guard<std::mutex> lock(g_plan_mu);
    fwd_ = fftw_plan_dft_1d(n, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft() {
    {
      std::lock_guard<std::mutex> lock(g_plan_mu);
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  cvec forward(const std::vector<double>& f) {
    for (int i = 0; i < n_; ++i) {
      in_[i][0] = f[i];
      in_[i][1] = 0.0;
    }
    fftw_execute(fwd_);
    cvec r(n_);
    for (int i = 0; i < n_; ++i) r[i] = {out_[i][0], out_[i][1]};
    return r;
  }
  std::vector<double> backward(const cvec& fh) {
    for (int i = 0; i < n_; ++i) {
      in_[i][0] = fh[i].real();
      in_[i][1] = fh[i].imag();
    }
    fftw_execute(bwd_);
    std::vector<double> r(n_);
    for (int i = 0; i < n_; ++i) r[i] = out_[i][0] / n_;
    return r;
  }

 private:
  int n_;
  fftw_complex *in_, *out_;
  fftw_plan fwd_, bwd_;
};

// exp(h L) for L = [[0, i xi], [i xi (1 - xi^2), 0]].
struct Prop {
  double c, s_over, s_times;  // cos(Om h), sin(Om h)/Om, Om sin(Om h)
};

Prop propagator(double xi, double h) {
  const double om2 = xi * xi * (1.0 - xi * xi);
  if (om2 <= 0.0) return {1.0, h, 0.0};
  const double om = std::sqrt(om2);
  return {std::cos(om * h), std::sin(om * h) / om, om * std::sin(om * h)};
}

void apply(const Prop& p, double xi, std::complex<double>& u, std::complex<double>& w) {
  const std::complex<double> I(0.0, 1.0);
  const std::complex<double> un = p.c * u + p.s_over * I * xi * w;
  const std::complex<double> wn = p.c * w + p.s_over * I * xi * (1.0 - xi * xi) * u;
  u = un;
  w = wn;
}

}  // namespace

double SolitonShape::U(double x) const {
  const double s = 1.0 / std::cosh(beta * x);
  return a * s * s;
}

double SolitonShape::Ux(double x) const {
  const double s = 1.0 / std::cosh(beta * x);
  return -2.0 * a * beta * s * s * std::tanh(beta * x);
}

SolitonShape soliton_shape(double v) {
  if (!(v > 1.0)) throw DomainError("soliton_profile: speed must exceed 1");
  SolitonShape s;
  s.v = v;
  s.a = 1.5 * (v * v - 1.0);
  s.beta = 0.5 * std::sqrt(v * v - 1.0);
  return s;
}

InitialData soliton_profile(double v, double x0, double L) {
  const SolitonShape s = soliton_shape(v);
  auto ev = [s, x0](double x) {
    const double y = x - x0;
    const double U = s.U(y), Ux = s.Ux(y);
    return DataSample{U, Ux, -s.v * Ux, -s.v * U};
  };
  return InitialData("soliton", L, ev);
}

double FieldSnapshot::mass() const {
  double m = 0.0;
  for (double v : u) m += v;
  return m * dx();
}

BoussinesqEvolver::BoussinesqEvolver(EvolveOptions opt) : opt_(opt) {
  if (!(opt_.L > 0) || opt_.n < 16 || !(opt_.dt > 0) || !(opt_.cutoff > 0))
    throw std::invalid_argument("evolve: bad grid options");
  const int n = opt_.n;
  xi_.resize(n);
  keep_.resize(n);
  dealias_.resize(n);
  const double dxi = kPi / opt_.L;
  const double xi_max = dxi * (n / 2);
  for (int i = 0; i < n; ++i) {
    const int m = i <= n / 2 ? i : i - n;
    xi_[i] = dxi * m;
    keep_[i] = std::abs(xi_[i]) <= opt_.cutoff;
    dealias_[i] = !opt_.dealias || std::abs(xi_[i]) <= 2.0 / 3.0 * xi_max;
  }
  if (n % 2 != 0) throw std::invalid_argument("evolve: grid size must be even");
  if (opt_.cutoff >= 1.0) throw std::invalid_argument("evolve: cutoff must lie below the unstable band |xi| > 1");
}

void BoussinesqEvolver::filter(cvec& uh) const {
  for (std::size_t i = 0; i < uh.size(); ++i)
    if (!keep_[i]) uh[i] = 0.0;
}

cvec BoussinesqEvolver::spectrum(const std::vector<double>& f) const {
  Fft fft(opt_.n);
  return fft.forward(f);
}

FieldSnapshot BoussinesqEvolver::initial(const InitialData& data) const {
  const int n = opt_.n;
  FieldSnapshot s;
  s.L = opt_.L;
  s.x.resize(n);
  s.u.resize(n);
  s.ut.resize(n);
  s.w.resize(n);
  const double dx = 2.0 * opt_.L / n;
  for (int i = 0; i < n; ++i) {
    s.x[i] = -opt_.L + dx * i;
    const DataSample d = data.eval(s.x[i]);
    s.u[i] = d.u0;
    s.ut[i] = d.u1;
    s.w[i] = d.v0;
  }
  // Project onto the filtered band so the invariant holds from t = 0.
  Fft fft(n);
  cvec uh = fft.forward(s.u), wh = fft.forward(s.w);
  filter(uh);
  filter(wh);
  s.u = fft.backward(uh);
  s.w = fft.backward(wh);
  cvec uth(n);
  for (int i = 0; i < n; ++i) uth[i] = std::complex<double>(0.0, xi_[i]) * wh[i];
  s.ut = fft.backward(uth);
  return s;
}

std::vector<FieldSnapshot> BoussinesqEvolver::run(const FieldSnapshot& s0, const std::vector<double>& stops) const {
  const int n = opt_.n;
  if (static_cast<int>(s0.u.size()) != n || std::abs(s0.L - opt_.L) > 1e-12)
    throw std::invalid_argument("evolve: snapshot grid does not match the evolver");
  Fft fft(n);
  const std::complex<double> I(0.0, 1.0);
  cvec uh = fft.forward(s0.u), wh = fft.forward(s0.w);
  filter(uh);
  filter(wh);

  // Nonlinear term in the w equation: i xi F[u^2], dealiased and filtered.
  auto nonlinear = [&](const cvec& u_hat) {
    cvec tmp = u_hat;
    for (int i = 0; i < n; ++i)
      if (!dealias_[i]) tmp[i] = 0.0;
    std::vector<double> u = fft.backward(tmp);
    for (double& v : u) v *= v;
    cvec q = fft.forward(u);
    for (int i = 0; i < n; ++i) q[i] = keep_[i] && dealias_[i] ? I * xi_[i] * q[i] : 0.0;
    return q;
  };

  std::vector<FieldSnapshot> out;
  double t = s0.t;
  double sup_prev = 0.0;
  for (double v : s0.u) sup_prev = std::max(sup_prev, std::abs(v));

  auto snapshot = [&](double tt) {
    FieldSnapshot s;
    s.t = tt;
    s.L = opt_.L;
    s.x = s0.x;
    s.u = fft.backward(uh);
    s.w = fft.backward(wh);
    cvec uth(n);
    for (int i = 0; i < n; ++i) uth[i] = I * xi_[i] * wh[i];
    s.ut = fft.backward(uth);
    return s;
  };

  for (double stop : stops) {
    const double span = stop - t;
    const int nsteps = std::max(1, static_cast<int>(std::ceil(std::abs(span) / opt_.dt - 1e-9)));
    const double h = span / nsteps;
    if (span == 0.0) {
      out.push_back(snapshot(t));
      continue;
    }
    std::vector<Prop> half(n), full(n);
    for (int i = 0; i < n; ++i) {
      half[i] = propagator(xi_[i], 0.5 * h);
      full[i] = propagator(xi_[i], h);
    }
    // Integrating-factor RK4; only the w component has a nonlinear forcing.
    cvec au(n), aw(n), bu(n), bw(n);
    for (int step = 0; step < nsteps; ++step) {
      const cvec k1 = nonlinear(uh);
      for (int i = 0; i < n; ++i) {
        au[i] = uh[i];
        aw[i] = wh[i] + 0.5 * h * k1[i];
        apply(half[i], xi_[i], au[i], aw[i]);
      }
      const cvec k2 = nonlinear(au);
      for (int i = 0; i < n; ++i) {
        bu[i] = uh[i];
        bw[i] = wh[i];
        apply(half[i], xi_[i], bu[i], bw[i]);
        bw[i] += 0.5 * h * k2[i];
      }
      const cvec k3 = nonlinear(bu);
      cvec cu(n), cw(n);
      for (int i = 0; i < n; ++i) {
        cu[i] = uh[i];
        cw[i] = wh[i];
        apply(half[i], xi_[i], cu[i], cw[i]);
        cw[i] += h * k3[i];
        apply(half[i], xi_[i], cu[i], cw[i]);
      }
      const cvec k4 = nonlinear(cu);
      // y_{n+1} = E(h) y + h/6 [E(h) k1 + 2 E(h/2)(k2 + k3)] + h/6 k4
      cvec nu(n), nw(n);
      for (int i = 0; i < n; ++i) {
        std::complex<double> yu = uh[i], yw = wh[i] + h / 6.0 * k1[i];
        apply(full[i], xi_[i], yu, yw);
        std::complex<double> mu = 0.0, mw = h / 3.0 * (k2[i] + k3[i]);
        apply(half[i], xi_[i], mu, mw);
        nu[i] = yu + mu;
        nw[i] = yw + mw + h / 6.0 * k4[i];
      }
      uh.swap(nu);
      wh.swap(nw);
      filter(uh);
      filter(wh);
      t = (step + 1 == nsteps) ? stop : t + h;

      if ((step & 15) == 15 || step + 1 == nsteps) {
        const std::vector<double> u = fft.backward(uh);
        double sup = 0.0;
        bool finite = true;
        for (double v : u) {
          if (!std::isfinite(v)) finite = false;
          sup = std::max(sup, std::abs(v));
        }
        if (!finite || (sup_prev > 1e-12 && sup > 2.0 * sup_prev && sup > 1e-6)) {
          std::vector<double> spec(n);
          for (int i = 0; i < n; ++i) spec[i] = std::abs(uh[i]);
          throw InstabilityError("evolve: blow-up detected at t = " + std::to_string(t), t, std::move(spec));
        }
        sup_prev = sup;
      }
    }
    out.push_back(snapshot(stop));
  }
  return out;
}

FieldSnapshot BoussinesqEvolver::linear_evolve(const FieldSnapshot& s0, double T) const {
  const int n = opt_.n;
  Fft fft(n);
  cvec uh = fft.forward(s0.u), wh = fft.forward(s0.w);
  filter(uh);
  filter(wh);
  for (int i = 0; i < n; ++i) apply(propagator(xi_[i], T), xi_[i], uh[i], wh[i]);
  FieldSnapshot s;
  s.t = s0.t + T;
  s.L = opt_.L;
  s.x = s0.x;
  s.u = fft.backward(uh);
  s.w = fft.backward(wh);
  cvec uth(n);
  for (int i = 0; i < n; ++i) uth[i] = std::complex<double>(0.0, xi_[i]) * wh[i];
  s.ut = fft.backward(uth);
  return s;
}

FieldSnapshot evolve(const InitialData& data, double T, EvolveOptions opt) {
  BoussinesqEvolver ev(opt);
  return ev.evolve(ev.initial(data), T);
}

CompareReport compare_values(const std::vector<ComparePoint>& asym, const FieldSnapshot& snap) {
  CompareReport r;
  r.t = snap.t;
  const double dx = snap.dx();
  double ss = 0.0;
  for (const ComparePoint& a : asym) {
    const double pos = (a.x + snap.L) / dx;
    const long i = std::lround(pos);
    if (std::abs(pos - static_cast<double>(i)) > 1e-6 || i < 0 || i >= static_cast<long>(snap.u.size()))
      throw DomainError("compare: asymptotic grid does not match the snapshot grid");
    ComparePoint p = a;
    p.u_pde = snap.u[i];
    r.points.push_back(p);
    const double e = std::abs(p.u_pde - p.u_asym);
    r.max_err = std::max(r.max_err, e);
    ss += e * e;
    r.max_u_pde = std::max(r.max_u_pde, std::abs(p.u_pde));
    r.max_u_asym = std::max(r.max_u_asym, std::abs(p.u_asym));
  }
  if (!r.points.empty()) r.rms_err = std::sqrt(ss / static_cast<double>(r.points.size()));
  return r;
}

CompareReport compare(const AsymptoticModel& model, const FieldSnapshot& snap, int jobs, int stride) {
  const double t = snap.t;
  const ZetaWindow& w = model.window();
  if (!(t >= 2.0)) throw DomainError("compare: snapshot time must be at least 2");
  if (w.hi * t >= snap.L) throw DomainError("compare: zeta window leaves the periodic domain");
  std::vector<ComparePoint> pts;
  for (std::size_t i = 0; i < snap.x.size(); i += std::max(1, stride)) {
    const double z = snap.x[i] / t;
    if (z >= w.lo && z <= w.hi) pts.push_back({snap.x[i], z, 0.0, 0.0});
  }
  const int nj = std::max(1, jobs);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nj);
  for (int j = 0; j < nj; ++j) {
    pool.emplace_back([&, j] {
      try {
        for (std::size_t i = j; i < pts.size(); i += nj) pts[i].u_asym = model.evaluate(pts[i].x, t).u;
      } catch (...) {
        errs[j] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return compare_values(pts, snap);
}

double fit_exponent(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2) throw std::invalid_argument("fit_exponent: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0 && y[i] > 0)) throw std::invalid_argument("fit_exponent: values must be positive");
    const double a = std::log(t[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bsq
