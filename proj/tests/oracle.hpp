#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerical code.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

struct Pt {
  double x;
  double y;
};

inline double rbf(Pt a, Pt b, double lengthscale_sq) {
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  return std::exp(-0.5 * (d / std::sqrt(lengthscale_sq)) * (d / std::sqrt(lengthscale_sq)));
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

/// Direct-inversion GP: mean = m + k^T K^-1 (y - m), var = 1 - k^T K^-1 k.
struct DirectGP {
  std::vector<Pt> xs;
  std::vector<double> ys;
  double lengthscale_sq;
  double noise_var;
  double prior_mean;
  Matrix k_inv;
  std::vector<double> weights;

  DirectGP(std::vector<Pt> x, std::vector<double> y, double ls, double noise, double mean)
      : xs(std::move(x)), ys(std::move(y)), lengthscale_sq(ls), noise_var(noise), prior_mean(mean) {
    const std::size_t n = xs.size();
    if (n == 0) return;
    Matrix k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) k[i][j] = rbf(xs[i], xs[j], lengthscale_sq) + (i == j ? noise_var : 0.0);
    }
    k_inv = invert(k);
    weights.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) weights[i] += k_inv[i][j] * (ys[j] - prior_mean);
    }
  }

  [[nodiscard]] std::pair<double, double> predict(Pt q) const {
    const std::size_t n = xs.size();
    std::vector<double> ks(n);
    for (std::size_t i = 0; i < n; ++i) ks[i] = rbf(xs[i], q, lengthscale_sq);
    double mean = prior_mean;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mean += ks[i] * weights[i];
      for (std::size_t j = 0; j < n; ++j) quad += ks[i] * k_inv[i][j] * ks[j];
    }
    return {mean, std::max(0.0, 1.0 - quad)};
  }
};

/// Distinct points on a fine lattice so kernel matrices stay well conditioned
/// enough for explicit inversion.
inline std::vector<Pt> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Pt> pts;
  while (pts.size() < n) {
    Pt p{u(rng), u(rng)};
    bool ok = true;
    for (const auto& q : pts) ok = ok && std::hypot(p.x - q.x, p.y - q.y) > 0.02;
    if (ok) pts.push_back(p);
  }
  return pts;
}

}  // namespace oracle
