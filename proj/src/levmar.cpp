// levmar.cpp - Levenberg-Marquardt with numeric Jacobian

#include "levmar.hpp"

#include <cmath>
#include <cstddef>

#include "error.hpp"

namespace snspd {

namespace {

// Solve A x = b in place, Gaussian elimination with partial pivoting.
// Returns false when A is numerically singular.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double big = std::abs(a[col * n + col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double v = std::abs(a[r * n + col]);
      if (v > big) { big = v; pivot = r; }
    }
    if (big == 0.0 || !std::isfinite(big)) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[pivot * n + c], a[col * n + c]);
      std::swap(b[pivot], b[col]);
    }
    double d = a[col * n + col];
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a[r * n + col] / d;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * b[c];
    b[i] = s / a[i * n + i];
  }
  return true;
}

// Invert symmetric positive-definite-ish matrix by solving n unit systems.
bool invert_matrix(const std::vector<double>& a, std::vector<double>& inv, std::size_t n) {
  inv.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> acopy = a;
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    if (!solve_linear(acopy, e, n)) return false;
    for (std::size_t r = 0; r < n; ++r) inv[r * n + k] = e[r];
  }
  return true;
}

} // namespace

LevMarResult levmar_fit(
    const std::function<double(double, const std::vector<double>&)>& model,
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<double>& weights, std::vector<double> initial,
    const LevMarOptions& opts) {
  const std::size_t n = xs.size();
  const std::size_t np = initial.size();
  if (n == 0 || ys.size() != n || weights.size() != n)
    fail(ErrorCode::invalid_argument, "levmar_fit: inconsistent data sizes");
  if (np == 0 || n <= np)
    fail(ErrorCode::invalid_argument, "levmar_fit: more points than parameters required");

  auto cost = [&](const std::vector<double>& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = model(xs[i], p) - ys[i];
      s += weights[i] * r * r;
    }
    return s;
  };

  std::vector<double> p = std::move(initial);
  double chi2 = cost(p);
  double lambda = 1e-3;

  std::vector<double> jac(n * np);      // sqrt(w) * dm/dp
  std::vector<double> resid(n);         // sqrt(w) * (m - y)
  std::vector<double> jtj(np * np), jtj_damped(np * np);
  std::vector<double> g(np), step(np);

  LevMarResult out;
  out.params = p;

  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations && !converged; ++iter) {
    // numeric Jacobian, central differences
    for (std::size_t j = 0; j < np; ++j) {
      double h = 1e-7 * std::abs(p[j]);
      if (h < 1e-10) h = 1e-10;
      std::vector<double> pp = p, pm = p;
      pp[j] += h;
      pm[j] -= h;
      for (std::size_t i = 0; i < n; ++i) {
        double d = (model(xs[i], pp) - model(xs[i], pm)) / (2.0 * h);
        jac[i * np + j] = std::sqrt(weights[i]) * d;
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      resid[i] = std::sqrt(weights[i]) * (model(xs[i], p) - ys[i]);

    for (std::size_t a = 0; a < np; ++a) {
      g[a] = 0.0;
      for (std::size_t i = 0; i < n; ++i) g[a] += jac[i * np + a] * resid[i];
      for (std::size_t b = a; b < np; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += jac[i * np + a] * jac[i * np + b];
        jtj[a * np + b] = s;
        jtj[b * np + a] = s;
      }
    }

    // try damped steps until one lowers the cost
    bool accepted = false;
    while (!accepted) {
      jtj_damped = jtj;
      for (std::size_t a = 0; a < np; ++a)
        jtj_damped[a * np + a] = jtj[a * np + a] * (1.0 + lambda) + 1e-300;
      for (std::size_t a = 0; a < np; ++a) step[a] = -g[a];
      std::vector<double> lhs = jtj_damped;
      if (!solve_linear(lhs, step, np)) {
        lambda *= 10.0;
        if (lambda > 1e14) break;
        continue;
      }
      std::vector<double> trial(np);
      for (std::size_t a = 0; a < np; ++a) trial[a] = p[a] + step[a];
      double trial_chi2 = cost(trial);
      if (std::isfinite(trial_chi2) && trial_chi2 <= chi2) {
        double max_rel = 0.0;
        for (std::size_t a = 0; a < np; ++a) {
          double rel = std::abs(step[a]) / (std::abs(p[a]) + 1e-30);
          if (rel > max_rel) max_rel = rel;
        }
        p = std::move(trial);
        chi2 = trial_chi2;
        lambda = std::max(lambda * 0.3, 1e-12);
        accepted = true;
        if (max_rel < opts.rel_param_tol) converged = true;
      } else {
        lambda *= 10.0;
        if (lambda > 1e14) break;
      }
    }
    if (!accepted) {
      // no downhill step left at maximal damping: stationary point
      converged = true;
    }
  }

  out.params = p;
  out.weighted_rss = chi2;
  out.iterations = iter;
  out.converged = converged;

  // covariance = inv(J^T W J) scaled by reduced chi-square, with the
  // Jacobian re-evaluated at the final parameters
  for (std::size_t j = 0; j < np; ++j) {
    double h = 1e-7 * std::abs(p[j]);
    if (h < 1e-10) h = 1e-10;
    std::vector<double> pp = p, pm = p;
    pp[j] += h;
    pm[j] -= h;
    for (std::size_t i = 0; i < n; ++i) {
      double d = (model(xs[i], pp) - model(xs[i], pm)) / (2.0 * h);
      jac[i * np + j] = std::sqrt(weights[i]) * d;
    }
  }
  for (std::size_t a = 0; a < np; ++a)
    for (std::size_t b = a; b < np; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += jac[i * np + a] * jac[i * np + b];
      jtj[a * np + b] = s;
      jtj[b * np + a] = s;
    }

  out.param_unc.assign(np, 0.0);
  std::vector<double> cov;
  if (invert_matrix(jtj, cov, np)) {
    double dof = static_cast<double>(n - np);
    double s2 = dof > 0 ? chi2 / dof : 0.0;
    for (std::size_t a = 0; a < np; ++a) {
      double v = cov[a * np + a] * s2;
      out.param_unc[a] = v > 0 ? std::sqrt(v) : 0.0;
    }
  }
  return out;
}

} // namespace snspd
