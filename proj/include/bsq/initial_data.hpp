#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bsq {

struct DataSample {
  double u0 = 0, u0x = 0, u1 = 0, v0 = 0;
};

// Real initial data on [-L, L], zero outside. eval() is exact for closed
// forms and interpolated for tabulated input.
class InitialData {
 public:
  using Evaluator = std::function<DataSample(double)>;

  InitialData() = default;
  InitialData(std::string label, double L, Evaluator eval, double h = 0.05);

  const std::string& label() const { return label_; }
  double L() const { return L_; }
  double h() const { return h_; }
  bool is_zero() const { return zero_; }

  DataSample eval(double x) const;

  // Uniform samples on [-L, L].
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& u0() const { return u0_; }
  const std::vector<double>& u1() const { return u1_; }
  const std::vector<double>& v0() const { return v0_; }

  // Integral of u1 over the line (trapezoid on the sample grid).
  double mass_u1() const;
  // max(|u0|, |u1|) at the truncation boundary.
  double tail() const;

  static InitialData zero(double L = 10.0);
  // u0 = a exp(-((x-x0)/w)^2), u1 = b d/dx exp(-((x-x0)/w)^2).
  static InitialData gaussian(double a, double w, double b = 0.0, double x0 = 0.0);
  // Same Gaussian with its spectrum multiplied by 0.5 erfc((|xi|-xi_c)/tau).
  static InitialData bandlimited_gaussian(double a, double w, double b, double xi_c,
                                          double tau, double x0 = 0.0, double tail_tol = 1e-13);
  // Samples (x, u0, u1) on a uniform grid; v0 by cumulative quadrature.
  static InitialData from_samples(const std::vector<double>& x, const std::vector<double>& u0,
                                  const std::vector<double>& u1, std::string label = "samples");

 private:
  std::string label_;
  double L_ = 0, h_ = 0.05;
  bool zero_ = true;
  Evaluator eval_;
  std::vector<double> x_, u0_, u1_, v0_;
};

}  // namespace bsq
