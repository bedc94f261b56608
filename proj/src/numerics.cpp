#include "bsq/numerics.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/special_functions/legendre.hpp>

namespace bsq {

namespace {
constexpr double kPiN = 3.14159265358979323846;
std::mutex g_cache_mu;
}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(g_cache_mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadRule r;
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> pos;
  for (double z : zeros) pos.push_back(z);
  auto weight = [n](double x) {
    const double dp = boost::math::legendre_p_prime<double>(n, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  for (auto z = pos.rbegin(); z != pos.rend(); ++z) {
    if (*z == 0.0) continue;
    r.x.push_back(-*z);
    r.w.push_back(weight(*z));
  }
  for (double z : pos) {
    r.x.push_back(z);
    r.w.push_back(weight(z));
  }
  return cache.emplace(n, std::move(r)).first->second;
}

const QuadRule& chebyshev_fejer(int n) {
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(g_cache_mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int j = 0; j < n; ++j) {
    const double th = (2.0 * (n - 1 - j) + 1.0) * kPiN / (2.0 * n);
    r.x[j] = std::cos(th);
    double s = 0.0;
    for (int m = 1; m <= n / 2; ++m) s += std::cos(2.0 * m * th) / (4.0 * m * m - 1.0);
    r.w[j] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

const Eigen::MatrixXd& chebyshev_diff(int n) {
  static std::map<int, Eigen::MatrixXd> cache;
  {
    std::lock_guard<std::mutex> lock(g_cache_mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
  }
  const QuadRule& q = chebyshev_fejer(n);
  // Barycentric weights for first-kind points.
  std::vector<double> bw(n);
  for (int j = 0; j < n; ++j) {
    const double th = (2.0 * (n - 1 - j) + 1.0) * kPiN / (2.0 * n);
    bw[j] = ((n - 1 - j) % 2 == 0 ? 1.0 : -1.0) * std::sin(th);
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (bw[j] / bw[i]) / (q.x[i] - q.x[j]);
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  std::lock_guard<std::mutex> lock(g_cache_mu);
  return cache.emplace(n, std::move(D)).first->second;
}

Eigen::VectorXcd chebyshev_coeffs(const Eigen::VectorXcd& vals) {
  const int n = static_cast<int>(vals.size());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  for (int m = 0; m < n; ++m) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) {
      const double th = (2.0 * (n - 1 - j) + 1.0) * kPiN / (2.0 * n);
      s += vals[j] * std::cos(m * th);
    }
    c[m] = s * (m == 0 ? 1.0 : 2.0) / static_cast<double>(n);
  }
  return c;
}

Eigen::VectorXcd chebyshev_deriv_coeffs(const Eigen::VectorXcd& c) {
  const int n = static_cast<int>(c.size());
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(n + 1);
  for (int m = n - 1; m >= 1; --m) d[m - 1] = d[m + 1] + 2.0 * m * c[m];
  if (n > 0) d[0] *= 0.5;
  return d.head(std::max(1, n - 1));
}

std::complex<double> chebyshev_eval(const Eigen::VectorXcd& c, double t) {
  std::complex<double> b1 = 0.0, b2 = 0.0;
  for (int m = static_cast<int>(c.size()) - 1; m >= 1; --m) {
    const std::complex<double> b0 = c[m] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + t * b1 - b2;
}

Eigen::Matrix3cd expm3(const Eigen::Matrix3cd& A) {
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (nrm > 0.25) s = static_cast<int>(std::ceil(std::log2(nrm / 0.25)));
  const Eigen::Matrix3cd B = A / std::ldexp(1.0, s);
  Eigen::Matrix3cd term = Eigen::Matrix3cd::Identity();
  Eigen::Matrix3cd E = Eigen::Matrix3cd::Identity();
  for (int m = 1; m <= 14; ++m) {
    term = term * B / static_cast<double>(m);
    E += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

std::complex<double> log_gamma(std::complex<double> z) {
  static const double g = 7.0;
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(kPiN) - std::log(std::sin(kPiN * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + g + 0.5;
  return 0.5 * std::log(2.0 * kPiN) + (z + 0.5) * std::log(t) - t + std::log(x);
}

std::complex<double> gamma_fn(std::complex<double> z) { return std::exp(log_gamma(z)); }

}  // namespace bsq
