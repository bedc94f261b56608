#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace bsq {

struct QuadRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre rule with n nodes, cached per n.
const QuadRule& gauss_legendre(int n);

// Chebyshev points of the first kind, x_j = cos((2j+1)pi/(2n)), ordered ascending,
// with Fejer-type weights for the integral over [-1, 1].
const QuadRule& chebyshev_fejer(int n);

// Differentiation matrix for values at chebyshev_fejer(n) nodes.
const Eigen::MatrixXd& chebyshev_diff(int n);

// Chebyshev coefficients of values at chebyshev_fejer(n) nodes.
Eigen::VectorXcd chebyshev_coeffs(const Eigen::VectorXcd& vals);
// Coefficients of the derivative of a Chebyshev series on [-1, 1].
Eigen::VectorXcd chebyshev_deriv_coeffs(const Eigen::VectorXcd& c);
// Evaluate a Chebyshev series at t in [-1, 1].
std::complex<double> chebyshev_eval(const Eigen::VectorXcd& c, double t);

// Matrix exponential of a 3x3 complex matrix (scaling and squaring, Taylor).
Eigen::Matrix3cd expm3(const Eigen::Matrix3cd& A);

// log Gamma(z) for complex z (Lanczos, g = 7), principal branch continuous on Re z > 0.
std::complex<double> log_gamma(std::complex<double> z);
std::complex<double> gamma_fn(std::complex<double> z);

}  // namespace bsq
