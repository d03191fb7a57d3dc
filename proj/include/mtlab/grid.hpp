#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "mtlab/core.hpp"

namespace mtlab {

/// Uniformly sampled function on the square window [-L, L]^2.
///
/// Cell (i, j) is centered at (-L + (i + 1/2) h, -L + (j + 1/2) h) with
/// h = 2L / n; index i runs along x1 and j along x2. Integrals are
/// approximated by cell-center sums h^2 * sum(values).
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(double half_length, std::size_t n, T fill = T{})
      : half_length_(half_length), n_(n), values_(n * n, fill) {
    require(n >= 2, ErrorKind::InvalidArgument, "grid resolution must be at least 2");
    require(half_length > 0.0 && std::isfinite(half_length), ErrorKind::InvalidArgument,
            "grid half-length must be positive");
  }

  /// Grid with the same geometry as `shape`.
  template <class U>
  static Grid like(const Grid<U>& shape, T fill = T{}) {
    return Grid(shape.half_length(), shape.size(), fill);
  }

  template <class Fn>
  static Grid sample(double half_length, std::size_t n, Fn&& fn) {
    Grid g(half_length, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = static_cast<T>(fn(g.center(i, j)));
    return g;
  }

  double half_length() const { return half_length_; }
  std::size_t size() const { return n_; }
  std::size_t cell_count() const { return values_.size(); }
  double spacing() const { return 2.0 * half_length_ / static_cast<double>(n_); }
  double cell_area() const { return spacing() * spacing(); }

  double coordinate(std::size_t i) const {
    return -half_length_ + (static_cast<double>(i) + 0.5) * spacing();
  }
  Vec2 center(std::size_t i, std::size_t j) const { return {coordinate(i), coordinate(j)}; }
  Vec2 center(std::size_t flat) const { return center(flat / n_, flat % n_); }

  T& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  T& operator[](std::size_t flat) { return values_[flat]; }
  const T& operator[](std::size_t flat) const { return values_[flat]; }

  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

 private:
  double half_length_ = 1.0;
  std::size_t n_ = 0;
  std::vector<T> values_;
};

using RealGrid = Grid<double>;
using ComplexGrid = Grid<complex>;

inline double integral(const RealGrid& g) {
  double s = 0.0;
  for (double v : g.values()) s += v;
  return s * g.cell_area();
}

inline double max_value(const RealGrid& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, v);
  return m;
}

/// Real-kind grids are finite; weight grids are also nonnegative.
inline bool is_weight(const RealGrid& g) {
  for (double v : g.values())
    if (!std::isfinite(v) || v < 0.0) return false;
  return true;
}

inline bool is_unit_weight(const RealGrid& g) {
  for (double v : g.values())
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
  return true;
}

inline void require_weight(const RealGrid& g, const char* what) {
  require(is_weight(g), ErrorKind::InvalidArgument,
          std::string(what) + " must be finite and nonnegative");
}

inline void require_unit_weight(const RealGrid& g, const char* what) {
  require(is_unit_weight(g), ErrorKind::InvalidArgument,
          std::string(what) + " must take values in [0, 1]");
}

/// H_w = w / ||w||_inf, the [0,1]-valued weight attached to w.
inline RealGrid normalize_sup(const RealGrid& w) {
  require_weight(w, "weight");
  const double m = max_value(w);
  RealGrid out = w;
  if (m > 0.0)
    for (double& v : out.values()) v /= m;
  return out;
}

inline RealGrid pointwise_product(const RealGrid& a, const RealGrid& b) {
  require(a.size() == b.size() && a.half_length() == b.half_length(), ErrorKind::InvalidArgument,
          "grids must share geometry");
  RealGrid out = a;
  for (std::size_t k = 0; k < out.cell_count(); ++k) out[k] *= b[k];
  return out;
}

}  // namespace mtlab
