#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "mtlab/grid.hpp"

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

/// Bessel J0: power series (long double) for x < 20, Hankel expansion beyond.
inline double bessel_j0(double x) {
  x = std::abs(x);
  if (x < 20.0) {
    const long double h = static_cast<long double>(x) / 2.0L;
    const long double h2 = h * h;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
      term *= -h2 / (static_cast<long double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-22L) break;
    }
    return static_cast<double>(sum);
  }
  // a_k = prod_{j=1..k} (2j - 1)^2 / (k! 8^k)
  double P = 0.0, Q = 0.0;
  double a = 1.0, zk = 1.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k);
      zk *= x;
    }
    const double t = a / zk;
    if (k > 0 && t > 1.0) break;
    if (k % 2 == 0)
      P += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * t;
    else
      Q -= (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * t;  // Q ~ -1/(8x) + ...
    if (t < 1e-18) break;
  }
  const double chi = x - pi / 4.0;
  return std::sqrt(2.0 / (pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

/// Adaptive Simpson quadrature on [a, b] to absolute tolerance eps.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double eps, int depth = 50) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double tol,
          int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (d <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, tol / 2.0, d - 1) +
           rec(mid, hi, fmid, frm, fhi, right, tol / 2.0, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, eps, depth);
}

/// Closed-form transform of dt on [0,1] x {0}: (1 - e^{-2 pi i x1}) / (2 pi i x1).
inline std::complex<double> flat_segment_hat(double x1) {
  if (x1 == 0.0) return 1.0;
  const std::complex<double> I(0.0, 1.0);
  return (1.0 - std::exp(-2.0 * pi * I * x1)) / (2.0 * pi * I * x1);
}

struct MonteCarlo {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Area of the unit disc inside the slab |x . u - s| <= 1/2 by sampling the square [-1,1]^2.
inline MonteCarlo disc_slab_area(double ux, double uy, double s, std::size_t samples,
                                 unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = d(rng), y = d(rng);
    if (x * x + y * y <= 1.0 && std::abs(x * ux + y * uy - s) <= 0.5) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {4.0 * p, 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

/// Exhaustive A_alpha: every cell center, dyadic R in [1, first power of two >= 2L].
inline double ball_functional_exhaustive(const mtlab::RealGrid& H, double alpha) {
  std::vector<double> radii{1.0};
  while (radii.back() < 2.0 * H.half_length()) radii.push_back(2.0 * radii.back());
  double best = 0.0;
  for (std::size_t c = 0; c < H.cell_count(); ++c) {
    const auto x0 = H.center(c);
    for (double R : radii) {
      double s = 0.0;
      for (std::size_t k = 0; k < H.cell_count(); ++k) {
        const auto y = H.center(k);
        const double dx = y.x1 - x0.x1, dy = y.x2 - x0.x2;
        if (dx * dx + dy * dy <= R * R) s += H[k];
      }
      best = std::max(best, s * H.cell_area() / std::pow(R, alpha));
    }
  }
  return best;
}

/// Exhaustive 4-D box functional: every pair of cells, every doubled-grid center.
inline double box_functional_direct(const mtlab::RealGrid& H, double alpha) {
  const std::size_t n = H.size();
  const double h = H.spacing(), L = H.half_length();
  const std::size_t m = 2 * n - 1;
  // Pair sums y + z land on u_a = -2L + (a + 1) h; accumulate pair masses per (a, b).
  std::vector<double> G(m * m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) G[(i + k) * m + (j + l)] += H(i, j) * H(k, l);
  std::vector<double> radii{1.0};
  while (radii.back() < 4.0 * L) radii.push_back(2.0 * radii.back());
  auto u = [&](std::size_t a) { return -2.0 * L + (static_cast<double>(a) + 1.0) * h; };
  double best = 0.0;
  for (std::size_t ca = 0; ca < m; ++ca)
    for (std::size_t cb = 0; cb < m; ++cb)
      for (double R1 : radii)
        for (double R2 : radii) {
          double s = 0.0;
          for (std::size_t a = 0; a < m; ++a) {
            if (std::abs(u(a) - u(ca)) > R1 + 1e-9) continue;
            for (std::size_t b = 0; b < m; ++b)
              if (std::abs(u(b) - u(cb)) <= R2 + 1e-9) s += G[a * m + b];
          }
          best = std::max(best, s * h * h * h * h / std::pow(R1 * R2, alpha));
        }
  return std::sqrt(best);
}

/// Exhaustive calligraphic A_alpha along v: tubes whose lower edge sits at
/// every cell projection, every dyadic R.
inline double tube_functional_exhaustive(const mtlab::RealGrid& H, double alpha, double vx,
                                         double vy) {
  const double r = std::hypot(vx, vy);
  const double px = -vy / r, py = vx / r;  // perp(v)
  std::vector<double> radii{1.0};
  while (radii.back() < 2.0 * std::sqrt(2.0) * H.half_length()) radii.push_back(2.0 * radii.back());
  double best = 0.0;
  for (double R : radii)
    for (std::size_t c = 0; c < H.cell_count(); ++c) {
      const auto x0 = H.center(c);
      const double offset = x0.x1 * px + x0.x2 * py + R;
      double s = 0.0;
      for (std::size_t k = 0; k < H.cell_count(); ++k) {
        const auto y = H.center(k);
        if (std::abs(y.x1 * px + y.x2 * py - offset) <= R + 1e-9) s += H[k];
      }
      best = std::max(best, s * H.cell_area() / std::pow(R, alpha));
    }
  return best;
}

/// Exhaustive sup of w(T) over 1-tubes with direction (dx, dy), lower edge at every cell.
inline double sup_tube_exhaustive(const mtlab::RealGrid& w, double dx, double dy) {
  const double r = std::hypot(dx, dy);
  const double px = -dy / r, py = dx / r;
  double best = 0.0;
  for (std::size_t c = 0; c < w.cell_count(); ++c) {
    const auto x0 = w.center(c);
    const double offset = x0.x1 * px + x0.x2 * py + 0.5;
    double s = 0.0;
    for (std::size_t k = 0; k < w.cell_count(); ++k) {
      const auto y = w.center(k);
      if (std::abs(y.x1 * px + y.x2 * py - offset) <= 0.5 + 1e-9) s += w[k];
    }
    best = std::max(best, s * w.cell_area());
  }
  return best;
}

/// Random grid with dyadic values k/16 in [0, 1], so cell sums are exact.
inline mtlab::RealGrid dyadic_random_grid(double L, std::size_t n, std::mt19937_64& rng,
                                          double density = 1.0) {
  std::uniform_int_distribution<int> level(0, 16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  mtlab::RealGrid g(L, n);
  for (auto& v : g.values()) v = u(rng) < density ? level(rng) / 16.0 : 0.0;
  return g;
}

}  // namespace oracle
