#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mtlab/core.hpp"
#include "mtlab/grid.hpp"
#include "mtlab/measures.hpp"

namespace mtlab {

/// Complex density f on the nodes of a measure, with cached norms.
class Density {
 public:
  Density() = default;
  Density(const DiscreteMeasure& measure, std::vector<complex> values)
      : values_(std::move(values)) {
    require(values_.size() == measure.size(), ErrorKind::InvalidArgument,
            "density length does not match the node count");
    double l1 = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double a = std::abs(values_[i]);
      l1 += a * measure.weights[i];
      l2 += a * a * measure.weights[i];
    }
    l1_ = l1;
    l2_ = std::sqrt(l2);
  }

  static Density constant(const DiscreteMeasure& measure, complex value = 1.0) {
    return Density(measure, std::vector<complex>(measure.size(), value));
  }

  /// Unimodular random phases, deterministic in `seed`.
  static Density random_phases(const DiscreteMeasure& measure, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<complex> v(measure.size());
    for (auto& z : v) z = unimodular(u(rng));
    return Density(measure, std::move(v));
  }

  /// f_i = e^{2 pi i x0 . xi_i}, which moves the peak of Ef to x0.
  static Density focused(const DiscreteMeasure& measure, Vec2 x0) {
    std::vector<complex> v(measure.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = unimodular(-dot(x0, measure.nodes[i]));
    return Density(measure, std::move(v));
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<complex>& values() const { return values_; }
  const complex& operator[](std::size_t i) const { return values_[i]; }
  double l1_norm() const { return l1_; }
  double l2_norm() const { return l2_; }

 private:
  std::vector<complex> values_;
  double l1_ = 0.0;
  double l2_ = 0.0;
};

inline complex sigma_hat(const DiscreteMeasure& measure, Vec2 x) {
  complex s = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i)
    s += measure.weights[i] * unimodular(dot(x, measure.nodes[i]));
  return s;
}

/// sigma_hat at many points, data-parallel over points.
inline std::vector<complex> sigma_hat(const DiscreteMeasure& measure,
                                      const std::vector<Vec2>& points) {
  std::vector<complex> out(points.size());
  parallel_for(points.size(), [&](std::size_t k) { out[k] = sigma_hat(measure, points[k]); });
  return out;
}

namespace detail {

/// Ef on the lattice x = (c1 + i h1, c2 + j h2), i < n1, j < n2, using the
/// separable factorization e^{-2 pi i x.xi} = e^{-2 pi i x1 xi1} e^{-2 pi i x2 xi2}.
inline std::vector<complex> extend_lattice(const DiscreteMeasure& measure,
                                           const std::vector<complex>& coeff,
                                           const std::vector<double>& axis1,
                                           const std::vector<double>& axis2) {
  const std::size_t nodes = measure.size();
  const std::size_t n1 = axis1.size(), n2 = axis2.size();
  std::vector<complex> b(n2 * nodes);
  parallel_for(n2, [&](std::size_t j) {
    for (std::size_t k = 0; k < nodes; ++k)
      b[j * nodes + k] = unimodular(axis2[j] * measure.nodes[k].x2);
  });
  std::vector<complex> out(n1 * n2);
  parallel_for(n1, [&](std::size_t i) {
    std::vector<complex> a(nodes);
    for (std::size_t k = 0; k < nodes; ++k)
      a[k] = coeff[k] * unimodular(axis1[i] * measure.nodes[k].x1);
    for (std::size_t j = 0; j < n2; ++j) {
      const complex* bj = &b[j * nodes];
      double re = 0.0, im = 0.0;
      for (std::size_t k = 0; k < nodes; ++k) {
        re += a[k].real() * bj[k].real() - a[k].imag() * bj[k].imag();
        im += a[k].real() * bj[k].imag() + a[k].imag() * bj[k].real();
      }
      out[i * n2 + j] = {re, im};
    }
  });
  return out;
}

inline std::vector<double> grid_axis(double half_length, std::size_t n) {
  std::vector<double> axis(n);
  const double h = 2.0 * half_length / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = -half_length + (static_cast<double>(i) + 0.5) * h;
  return axis;
}

}  // namespace detail

/// Ef(x) = sum_i e^{-2 pi i x.xi_i} f_i sigma_i at every cell center of `shape`.
template <class T>
ComplexGrid extend(const DiscreteMeasure& measure, const Density& f, const Grid<T>& shape) {
  require(f.size() == measure.size(), ErrorKind::InvalidArgument,
          "density length does not match the node count");
  std::vector<complex> coeff(measure.size());
  for (std::size_t k = 0; k < coeff.size(); ++k) coeff[k] = f[k] * measure.weights[k];
  const auto axis = detail::grid_axis(shape.half_length(), shape.size());
  ComplexGrid out = ComplexGrid::like(shape);
  out.values() = detail::extend_lattice(measure, coeff, axis, axis);
  return out;
}

/// sigma_hat sampled at every cell center of `shape`.
template <class T>
ComplexGrid sigma_hat_grid(const DiscreteMeasure& measure, const Grid<T>& shape) {
  return extend(measure, Density::constant(measure), shape);
}

// ---------------------------------------------------------------------------
// Littlewood-Paley pieces.

namespace detail {
inline double smooth_step_g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
}  // namespace detail

/// Smooth even bump: 1 on [-1, 1], 0 outside (-2, 2).
inline double psi0(double r) {
  const double a = std::abs(r);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = detail::smooth_step_g(2.0 - a), down = detail::smooth_step_g(a - 1.0);
  return up / (up + down);
}

/// psi_0 for l = 0, psi_0(r / 2^l) - psi_0(r / 2^{l-1}) for l >= 1.
inline double psi(int l, double r) {
  require(l >= 0, ErrorKind::InvalidArgument, "Littlewood-Paley index must be >= 0");
  if (l == 0) return psi0(r);
  return psi0(std::ldexp(r, -l)) - psi0(std::ldexp(r, -(l - 1)));
}

/// Radial range [lo, hi] on which psi_l may be nonzero.
inline std::pair<double, double> psi_support(int l) {
  if (l == 0) return {0.0, 2.0};
  return {std::ldexp(1.0, l - 1), std::ldexp(1.0, l + 1)};
}

// ---------------------------------------------------------------------------
// Quasi-random sampling and block bounds.

/// Radical inverse of i in the given prime base (Halton sequence coordinate).
inline double halton(std::size_t i, unsigned base) {
  double f = 1.0, r = 0.0;
  std::size_t k = i + 1;
  while (k > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(k % base);
    k /= base;
  }
  return r;
}

namespace detail {
/// Halton coordinate under a fixed irrational rotation. Plain base-2 points are
/// dyadic and land on the integer zeros of oscillatory transforms over dyadic shells.
inline double rotated_halton(std::size_t i, unsigned base) {
  const double shift = base == 2 ? 0.6180339887498949 : 0.4142135623730950;
  const double u = halton(i, base) + shift;
  return u - std::floor(u);
}

/// Maps u in [0,1) to a signed value with |value| in [lo, hi].
inline double signed_shell(double u, double lo, double hi) {
  const double s = 2.0 * u - 1.0;
  const double mag = lo + std::abs(s) * (hi - lo);
  return s < 0.0 ? -mag : mag;
}
}  // namespace detail

struct BlockBound {
  double max_value = 0.0;
  Vec2 argmax;
  std::size_t samples = 0;
};

/// max |psi_l(x1) psi_m(x2) sigma_hat(x)| over Halton samples of the block.
inline BlockBound block_bounds_tensor(const DiscreteMeasure& measure, int l, int m,
                                      std::size_t sample_count) {
  require(sample_count >= 64, ErrorKind::InvalidArgument, "block bounds need >= 64 samples");
  const auto [lo1, hi1] = psi_support(l);
  const auto [lo2, hi2] = psi_support(m);
  std::vector<Vec2> pts(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i)
    pts[i] = {detail::signed_shell(detail::rotated_halton(i, 2), lo1, hi1),
              detail::signed_shell(detail::rotated_halton(i, 3), lo2, hi2)};
  const auto values = sigma_hat(measure, pts);
  BlockBound out;
  out.samples = sample_count;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double v = std::abs(psi(l, pts[i].x1) * psi(m, pts[i].x2) * values[i]);
    if (v > out.max_value) {
      out.max_value = v;
      out.argmax = pts[i];
    }
  }
  return out;
}

/// max |psi_l(x.v) sigma_hat(x)| over Halton samples of the slab
/// 2^{l-1} <= |x.v| <= 2^{l+1}, across-extent |x.v_perp| <= min(x_max, 2^{l+1}).
inline BlockBound block_bounds_directional(const DiscreteMeasure& measure, Vec2 v, int l,
                                           std::size_t sample_count, double x_max) {
  require(sample_count >= 64, ErrorKind::InvalidArgument, "block bounds need >= 64 samples");
  require(x_max > 0.0, ErrorKind::InvalidArgument, "x_max must be positive");
  v = normalized(v);
  const Vec2 across = perp(v);
  const auto [lo, hi] = psi_support(l);
  const double width = std::min(x_max, std::ldexp(1.0, l + 1));
  std::vector<Vec2> pts(sample_count);
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double a = detail::signed_shell(detail::rotated_halton(i, 2), lo, hi);
    const double b = (2.0 * detail::rotated_halton(i, 3) - 1.0) * width;
    pts[i] = a * v + b * across;
  }
  const auto values = sigma_hat(measure, pts);
  BlockBound out;
  out.samples = sample_count;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const double val = std::abs(psi(l, dot(pts[i], v)) * values[i]);
    if (val > out.max_value) {
      out.max_value = val;
      out.argmax = pts[i];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decay fits.

enum class DecayRegime { TensorAxis1, TensorAxis2, TensorProduct, Directional };

inline const char* to_string(DecayRegime r) {
  switch (r) {
    case DecayRegime::TensorAxis1: return "tensor-axis1";
    case DecayRegime::TensorAxis2: return "tensor-axis2";
    case DecayRegime::TensorProduct: return "tensor-product";
    case DecayRegime::Directional: return "directional";
  }
  return "unknown";
}

struct DecaySample {
  Vec2 x;
  double value = 0.0;  // |sigma_hat(x)|
};

struct DecayFit {
  DecayRegime regime = DecayRegime::Directional;
  double exponent = 0.0;  // delta-hat
  double constant = 0.0;  // max |sigma_hat| gauge^delta-hat over used samples
  double gauge_min = 0.0;
  double gauge_max = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  std::size_t used = 0;
  std::size_t dropped_zero = 0;
  std::size_t dropped_region = 0;
};

inline constexpr double decay_zero_threshold = 1e-13;

/// Gauge of x in the regime's region, or a negative value outside the region.
inline double decay_gauge(Vec2 x, DecayRegime regime, Vec2 v) {
  const double a1 = std::abs(x.x1), a2 = std::abs(x.x2);
  switch (regime) {
    case DecayRegime::TensorAxis1: return a1 >= 1.0 && a2 <= 1.0 ? a1 : -1.0;
    case DecayRegime::TensorAxis2: return a2 >= 1.0 && a1 <= 1.0 ? a2 : -1.0;
    case DecayRegime::TensorProduct: return a1 >= 1.0 && a2 >= 1.0 ? a1 * a2 : -1.0;
    case DecayRegime::Directional: {
      const double g = std::abs(dot(x, v));
      return g >= 1.0 ? g : -1.0;
    }
  }
  return -1.0;
}

/// Least-squares fit of log|sigma_hat| = log C - delta log(gauge).
inline DecayFit fit_decay(const std::vector<DecaySample>& samples, DecayRegime regime,
                          Vec2 v = {1.0, 0.0}) {
  if (regime == DecayRegime::Directional) v = normalized(v);
  DecayFit fit;
  fit.regime = regime;
  std::vector<double> lx, ly, gauges, vals;
  for (const auto& s : samples) {
    const double g = decay_gauge(s.x, regime, v);
    if (g < 0.0) {
      ++fit.dropped_region;
      continue;
    }
    if (!(s.value >= decay_zero_threshold)) {
      ++fit.dropped_zero;
      continue;
    }
    gauges.push_back(g);
    vals.push_back(s.value);
    lx.push_back(std::log(g));
    ly.push_back(std::log(s.value));
  }
  fit.used = gauges.size();
  if (fit.used < 16)
    throw Error(ErrorKind::InsufficientData,
                "decay fit has " + std::to_string(fit.used) +
                    " usable samples (need 16); dropped " + std::to_string(fit.dropped_zero) +
                    " zeros and " + std::to_string(fit.dropped_region) + " out of region");
  const LineFit line = fit_line(lx, ly);
  fit.exponent = -line.slope;
  fit.residual = line.rms_residual;
  fit.gauge_min = *std::min_element(gauges.begin(), gauges.end());
  fit.gauge_max = *std::max_element(gauges.begin(), gauges.end());
  for (std::size_t i = 0; i < gauges.size(); ++i)
    fit.constant = std::max(fit.constant, vals[i] * std::pow(gauges[i], fit.exponent));
  return fit;
}

/// |sigma_hat| at g * direction for `count` log-spaced g in [g_lo, g_hi].
inline std::vector<DecaySample> sample_ray(const DiscreteMeasure& measure, Vec2 direction,
                                           double g_lo, double g_hi, std::size_t count) {
  const auto g = log_spaced(g_lo, g_hi, count);
  std::vector<Vec2> pts(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = g[i] * direction;
  const auto values = sigma_hat(measure, pts);
  std::vector<DecaySample> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = {pts[i], std::abs(values[i])};
  return out;
}

/// |sigma_hat(s, s)| for log-spaced s; the tensor-product gauge there is s^2.
inline std::vector<DecaySample> sample_diagonal(const DiscreteMeasure& measure, double s_lo,
                                                double s_hi, std::size_t count) {
  return sample_ray(measure, {1.0, 1.0}, s_lo, s_hi, count);
}

}  // namespace mtlab
