// levmar.hpp - damped least squares for the small peak-shape models
#pragma once

#include <functional>
#include <vector>

namespace snspd {

struct LevMarResult {
  std::vector<double> params;
  std::vector<double> param_unc;   // one-sigma, from the scaled covariance
  double weighted_rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct LevMarOptions {
  int max_iterations = 200;
  double rel_param_tol = 1e-9; // converged when every parameter moves less than this
};

// Minimizes sum_i w_i * (model(x_i, p) - y_i)^2.
// `model` evaluates one point; the Jacobian is taken by central
// differences (the models here are cheap and smooth).
LevMarResult levmar_fit(
    const std::function<double(double x, const std::vector<double>& p)>& model,
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<double>& weights, std::vector<double> initial,
    const LevMarOptions& opts = {});

} // namespace snspd
