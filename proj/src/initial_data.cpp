#include "bsq/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "bsq/numerics.hpp"

namespace bsq {

InitialData::InitialData(std::string label, double L, Evaluator eval, double h)
    : label_(std::move(label)), L_(L), h_(h), zero_(false), eval_(std::move(eval)) {
  const int n = static_cast<int>(std::lround(2.0 * L_ / h_));
  h_ = 2.0 * L_ / n;
  x_.resize(n + 1);
  u0_.resize(n + 1);
  u1_.resize(n + 1);
  v0_.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    x_[i] = -L_ + i * h_;
    const DataSample s = eval_(x_[i]);
    u0_[i] = s.u0;
    u1_[i] = s.u1;
    v0_[i] = s.v0;
  }
}

DataSample InitialData::eval(double x) const {
  if (zero_ || x < -L_ || x > L_) return {};
  return eval_(x);
}

double InitialData::mass_u1() const {
  if (u1_.size() < 2) return 0.0;
  double s = 0.5 * (u1_.front() + u1_.back());
  for (std::size_t i = 1; i + 1 < u1_.size(); ++i) s += u1_[i];
  return s * h_;
}

double InitialData::tail() const {
  if (u0_.empty()) return 0.0;
  return std::max({std::abs(u0_.front()), std::abs(u0_.back()), std::abs(u1_.front()),
                   std::abs(u1_.back())});
}

InitialData InitialData::zero(double L) {
  InitialData d;
  d.label_ = "zero";
  d.L_ = L;
  d.h_ = 0.05;
  d.zero_ = true;
  const int n = static_cast<int>(std::lround(2.0 * L / d.h_));
  for (int i = 0; i <= n; ++i) d.x_.push_back(-L + i * d.h_);
  d.u0_.assign(d.x_.size(), 0.0);
  d.u1_ = d.u0_;
  d.v0_ = d.u0_;
  return d;
}

InitialData InitialData::gaussian(double a, double w, double b, double x0) {
  if (!(w > 0)) throw std::invalid_argument("gaussian: width must be positive");
  const double L = std::abs(x0) + w * std::sqrt(40.0);
  auto ev = [=](double x) {
    const double y = (x - x0) / w;
    const double g = std::exp(-y * y);
    const double gx = -2.0 * y / w * g;
    return DataSample{a * g, a * gx, b * gx, b * g};
  };
  return InitialData("gaussian", L, ev);
}

InitialData InitialData::bandlimited_gaussian(double a, double w, double b, double xi_c, double tau,
                                              double x0, double tail_tol) {
  if (!(w > 0 && tau > 0 && xi_c > 0)) throw std::invalid_argument("bandlimited_gaussian: bad parameters");
  // g_W(x) = (w / sqrt(pi)) int_0^inf exp(-w^2 xi^2 / 4) W(xi) cos(xi (x - x0)) dxi.
  const double xi_end = xi_c + 9.0 * tau;
  const int panels = 64;
  const QuadRule& gl = gauss_legendre(16);
  auto nodes = std::make_shared<std::vector<double>>();
  auto weights = std::make_shared<std::vector<double>>();
  for (int p = 0; p < panels; ++p) {
    const double lo = xi_end * p / panels, hi = xi_end * (p + 1) / panels;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
      const double xi = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.x[j];
      const double W = 0.5 * std::erfc((xi - xi_c) / tau);
      nodes->push_back(xi);
      weights->push_back(0.5 * (hi - lo) * gl.w[j] * w / std::sqrt(M_PI) * std::exp(-w * w * xi * xi / 4.0) * W);
    }
  }
  auto ev = [=](double x) {
    double g = 0.0, gx = 0.0;
    const double y = x - x0;
    for (std::size_t j = 0; j < nodes->size(); ++j) {
      const double xi = (*nodes)[j];
      g += (*weights)[j] * std::cos(xi * y);
      gx -= (*weights)[j] * xi * std::sin(xi * y);
    }
    return DataSample{a * g, a * gx, b * gx, b * g};
  };
  // Envelope of the tail is dominated by the window edge, ~ exp(-tau^2 x^2 / 4) / x.
  const double amp = std::max(std::abs(a), std::abs(b)) * w * std::exp(-w * w * xi_c * xi_c / 4.0) + 1e-300;
  double L = std::abs(x0) + 10.0;
  while (L < 5000.0 && amp * std::exp(-tau * tau * L * L / 4.0) / L > tail_tol) L += 5.0;
  return InitialData("bandlimited_gaussian", L, ev);
}

InitialData InitialData::from_samples(const std::vector<double>& x, const std::vector<double>& u0,
                                      const std::vector<double>& u1, std::string label) {
  const std::size_t n = x.size();
  if (n < 8 || u0.size() != n || u1.size() != n) throw std::invalid_argument("from_samples: need >= 8 aligned samples");
  const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * std::max(1.0, h)) throw std::invalid_argument("from_samples: grid not uniform");
  // Cumulative integral of u1 with a four-point cell rule.
  auto v = std::make_shared<std::vector<double>>(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double cell;
    if (i >= 1 && i + 2 < n)
      cell = h / 24.0 * (-u1[i - 1] + 13.0 * u1[i] + 13.0 * u1[i + 1] - u1[i + 2]);
    else
      cell = 0.5 * h * (u1[i] + u1[i + 1]);
    (*v)[i + 1] = (*v)[i] + cell;
  }
  auto a0 = std::make_shared<std::vector<double>>(u0);
  auto a1 = std::make_shared<std::vector<double>>(u1);
  const double x0 = x.front();
  // Six-point local Lagrange interpolation.
  auto ev = [=](double xq) {
    const double t = (xq - x0) / h;
    long i0 = static_cast<long>(std::floor(t)) - 2;
    i0 = std::clamp<long>(i0, 0, static_cast<long>(n) - 6);
    double c[6], dc[6];
    for (int j = 0; j < 6; ++j) {
      double p = 1.0, dp = 0.0;
      const double xj = static_cast<double>(i0 + j);
      for (int m = 0; m < 6; ++m) {
        if (m == j) continue;
        const double xm = static_cast<double>(i0 + m);
        double term = 1.0 / (xj - xm);
        for (int q = 0; q < 6; ++q) {
          if (q == j || q == m) continue;
          term *= (t - static_cast<double>(i0 + q)) / (xj - static_cast<double>(i0 + q));
        }
        dp += term;
        p *= (t - xm) / (xj - xm);
      }
      c[j] = p;
      dc[j] = dp / h;
    }
    DataSample s;
    for (int j = 0; j < 6; ++j) {
      s.u0 += c[j] * (*a0)[i0 + j];
      s.u0x += dc[j] * (*a0)[i0 + j];
      s.u1 += c[j] * (*a1)[i0 + j];
      s.v0 += c[j] * (*v)[i0 + j];
    }
    return s;
  };
  const double L = 0.5 * (x.back() - x.front());
  if (std::abs(x.back() + x.front()) > 1e-6 * std::max(1.0, L))
    throw std::invalid_argument("from_samples: grid must be symmetric about x = 0");
  return InitialData(std::move(label), L, ev, h);
}

}  // namespace bsq
