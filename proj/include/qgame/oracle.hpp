#pragma once

// Brute-force grid verification: argmax, eps-Nash certificates, full
// scans, and least-squares sinusoid fits. Deliberately independent of
// the closed-form solvers these routines are used to certify.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgame {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Grid evidence that a point is an eps-Nash equilibrium. `gain` is the
/// best unilateral improvement found on the grid; `epsilon_effective`
/// folds the grid resolution into the claim via a derivative bound.
struct NashCertificate {
  double epsilon = 0.0;
  std::size_t grid_n = 0;
  double gain1 = 0.0;
  double gain2 = 0.0;
  bool pass = false;
  double theta = 0.0;
  double phi = 0.0;
  double epsilon_effective = 0.0;
};

// Ties keep the smaller argument.
template <class F>
std::pair<double, double> grid_argmax(F&& f, Interval iv, std::size_t grid_n) {
  if (grid_n < 2) throw std::invalid_argument("grid_argmax: need at least 2 points");
  const double step = (iv.hi - iv.lo) / static_cast<double>(grid_n - 1);
  double best_x = iv.lo;
  double best = f(iv.lo);
  for (std::size_t i = 1; i < grid_n; ++i) {
    const double x = i + 1 == grid_n ? iv.hi : iv.lo + step * static_cast<double>(i);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

template <class F1, class F2>
NashCertificate verify_nash(F1&& f1, F2&& f2, double theta, double phi,
                            Interval theta_iv, Interval phi_iv, double epsilon,
                            std::size_t grid_n, double lipschitz_bound = 0.0) {
  if (grid_n < 2) throw std::invalid_argument("verify_nash: need at least 2 points");
  NashCertificate cert;
  cert.epsilon = epsilon;
  cert.grid_n = grid_n;
  cert.theta = theta;
  cert.phi = phi;
  const double v1 = f1(theta, phi);
  const double v2 = f2(theta, phi);
  cert.gain1 = grid_argmax([&](double t) { return f1(t, phi); }, theta_iv, grid_n)
                   .second - v1;
  cert.gain2 = grid_argmax([&](double p) { return f2(theta, p); }, phi_iv, grid_n)
                   .second - v2;
  cert.pass = cert.gain1 <= epsilon && cert.gain2 <= epsilon;
  const double step = std::max(theta_iv.hi - theta_iv.lo, phi_iv.hi - phi_iv.lo) /
                      static_cast<double>(grid_n - 1);
  cert.epsilon_effective = epsilon + lipschitz_bound * step;
  return cert;
}

// Every grid point no player can improve on by more than epsilon along
// its own axis. Quadratic in grid_n, hence the hard cost guard.
template <class F1, class F2>
std::vector<std::pair<double, double>> nash_scan(F1&& f1, F2&& f2, Interval theta_iv,
                                                 Interval phi_iv, double epsilon,
                                                 std::size_t grid_n) {
  if (grid_n < 2) throw std::invalid_argument("nash_scan: need at least 2 points");
  if (grid_n > 2000)
    throw std::invalid_argument("nash_scan: grid beyond the 2000-per-axis cost guard");
  const double tstep = (theta_iv.hi - theta_iv.lo) / static_cast<double>(grid_n - 1);
  const double pstep = (phi_iv.hi - phi_iv.lo) / static_cast<double>(grid_n - 1);
  std::vector<double> thetas(grid_n), phis(grid_n);
  for (std::size_t i = 0; i < grid_n; ++i) {
    thetas[i] = i + 1 == grid_n ? theta_iv.hi : theta_iv.lo + tstep * i;
    phis[i] = i + 1 == grid_n ? phi_iv.hi : phi_iv.lo + pstep * i;
  }
  std::vector<double> t1(grid_n * grid_n), t2(grid_n * grid_n);
  for (std::size_t i = 0; i < grid_n; ++i)
    for (std::size_t j = 0; j < grid_n; ++j) {
      t1[i * grid_n + j] = f1(thetas[i], phis[j]);
      t2[i * grid_n + j] = f2(thetas[i], phis[j]);
    }
  std::vector<double> colmax1(grid_n, -1e300), rowmax2(grid_n, -1e300);
  for (std::size_t i = 0; i < grid_n; ++i)
    for (std::size_t j = 0; j < grid_n; ++j) {
      colmax1[j] = std::max(colmax1[j], t1[i * grid_n + j]);
      rowmax2[i] = std::max(rowmax2[i], t2[i * grid_n + j]);
    }
  std::vector<std::pair<double, double>> hits;
  for (std::size_t i = 0; i < grid_n; ++i)
    for (std::size_t j = 0; j < grid_n; ++j)
      if (colmax1[j] - t1[i * grid_n + j] <= epsilon &&
          rowmax2[i] - t2[i * grid_n + j] <= epsilon)
        hits.emplace_back(thetas[i], phis[j]);
  return hits;
}

struct SinusoidFit {
  double offset = 0.0;
  double sin_coeff = 0.0;
  double cos_coeff = 0.0;
  double max_residual = 0.0;
};

// Least-squares fit of y ~ offset + a sin(2x) + b cos(2x) via the 3x3
// normal equations. A vanishing pivot means the samples cannot
// distinguish the basis functions.
inline SinusoidFit fit_sinusoid(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("fit_sinusoid: need at least 3 samples");
  const double inv_n = 1.0 / static_cast<double>(samples.size());
  double m[3][3] = {};
  double rhs[3] = {};
  for (const auto& [x, y] : samples) {
    const double g[3] = {1.0, std::sin(2.0 * x), std::cos(2.0 * x)};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += g[i] * y * inv_n;
      for (int j = 0; j < 3; ++j) m[i][j] += g[i] * g[j] * inv_n;
    }
  }
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[perm[r]][col]) > std::abs(m[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    const double diag = m[perm[col]][col];
    if (std::abs(diag) < 1e-12)
      throw std::invalid_argument("fit_sinusoid: rank-deficient sample set");
    for (int r = col + 1; r < 3; ++r) {
      const double factor = m[perm[r]][col] / diag;
      for (int c = col; c < 3; ++c) m[perm[r]][c] -= factor * m[perm[col]][c];
      rhs[perm[r]] -= factor * rhs[perm[col]];
    }
  }
  double sol[3];
  for (int col = 2; col >= 0; --col) {
    double acc = rhs[perm[col]];
    for (int c = col + 1; c < 3; ++c) acc -= m[perm[col]][c] * sol[c];
    sol[col] = acc / m[perm[col]][col];
  }
  SinusoidFit fit{sol[0], sol[1], sol[2], 0.0};
  for (const auto& [x, y] : samples) {
    const double model = fit.offset + fit.sin_coeff * std::sin(2.0 * x) +
                         fit.cos_coeff * std::cos(2.0 * x);
    fit.max_residual = std::max(fit.max_residual, std::abs(y - model));
  }
  return fit;
}

}  // namespace qgame
