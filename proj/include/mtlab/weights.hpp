#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "mtlab/core.hpp"
#include "mtlab/fft.hpp"
#include "mtlab/grid.hpp"

namespace mtlab {

/// Cells whose projection is within this distance of a tube edge count as inside.
inline constexpr double membership_slack = 1e-9;

/// Neighborhood {x : |x . perp(direction) - offset| <= cross_section / 2}.
struct Tube {
  Vec2 direction{1.0, 0.0};
  double offset = 0.0;
  double cross_section = 1.0;

  bool contains(Vec2 x) const {
    return std::abs(dot(x, perp(direction)) - offset) <= 0.5 * cross_section + membership_slack;
  }
};

inline Tube make_tube(Vec2 direction, double offset, double cross_section = 1.0) {
  require(cross_section > 0.0, ErrorKind::InvalidArgument, "tube cross-section must be positive");
  return {normalized(direction), offset, cross_section};
}

enum class FamilyKind { SlopeM, PerpV, All };

/// A finite set of tube directions: the two slopes of T_m, the single
/// direction of T_v, or an angular net.
struct TubeFamily {
  FamilyKind kind = FamilyKind::All;
  double m = 1.0;
  Vec2 v{1.0, 0.0};
  double dtheta = pi / 180.0;

  static TubeFamily slope(double m) {
    require(m >= 0.0 && std::isfinite(m), ErrorKind::InvalidArgument,
            "slope family needs a finite m >= 0");
    TubeFamily f;
    f.kind = FamilyKind::SlopeM;
    // T_m = T_{1/m}: store the representative in [0, 1].
    f.m = m > 1.0 ? 1.0 / m : m;
    return f;
  }
  static TubeFamily perpendicular_to(Vec2 v) {
    TubeFamily f;
    f.kind = FamilyKind::PerpV;
    f.v = normalized(v);
    return f;
  }
  static TubeFamily all(double dtheta = pi / 180.0) {
    require(dtheta > 0.0 && dtheta <= pi, ErrorKind::InvalidArgument,
            "angular step must lie in (0, pi]");
    TubeFamily f;
    f.kind = FamilyKind::All;
    f.dtheta = dtheta;
    return f;
  }

  std::vector<Vec2> directions() const {
    switch (kind) {
      case FamilyKind::SlopeM: {
        const double r = std::sqrt(1.0 + m * m);
        return {{1.0 / r, -m / r}, {-m / r, 1.0 / r}};
      }
      case FamilyKind::PerpV: return {perp(v)};
      case FamilyKind::All: {
        const auto count = static_cast<std::size_t>(std::ceil(pi / dtheta - 1e-12));
        std::vector<Vec2> dirs(count);
        for (std::size_t k = 0; k < count; ++k)
          dirs[k] = unit_at_angle(static_cast<double>(k) * dtheta);
        return dirs;
      }
    }
    return {};
  }

  std::string describe() const {
    switch (kind) {
      case FamilyKind::SlopeM: return "slope m=" + std::to_string(m);
      case FamilyKind::PerpV:
        return "perp v=(" + std::to_string(v.x1) + "," + std::to_string(v.x2) + ")";
      case FamilyKind::All: return "all dtheta=" + std::to_string(dtheta);
    }
    return "";
  }
};

/// w(T) = h^2 sum of w over cells whose centers lie in T.
inline double tube_mass(const RealGrid& w, const Tube& t) {
  double s = 0.0;
  for (std::size_t k = 0; k < w.cell_count(); ++k)
    if (w[k] != 0.0 && t.contains(w.center(k))) s += w[k];
  return s * w.cell_area();
}

struct TubeSup {
  double value = 0.0;
  Tube witness;
};

namespace detail {

/// Projections of the positive-weight cells onto `axis`, sorted ascending.
struct SortedProjection {
  std::vector<double> p;       // sorted projections
  std::vector<double> prefix;  // prefix[k] = sum of weights of the first k entries
};

inline SortedProjection project_sorted(const RealGrid& w, Vec2 axis) {
  std::vector<std::pair<double, double>> items;
  items.reserve(w.cell_count());
  for (std::size_t k = 0; k < w.cell_count(); ++k)
    if (w[k] > 0.0) items.push_back({dot(w.center(k), axis), w[k]});
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SortedProjection out;
  out.p.resize(items.size());
  out.prefix.assign(items.size() + 1, 0.0);
  for (std::size_t k = 0; k < items.size(); ++k) {
    out.p[k] = items[k].first;
    out.prefix[k + 1] = out.prefix[k] + items[k].second;
  }
  return out;
}

/// Best window [lo, lo + width] with lo at a projection; returns (sum, lo).
inline std::pair<double, double> best_window(const SortedProjection& sp, double width) {
  double best = 0.0, best_lo = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < sp.p.size(); ++i) {
    if (i > 0 && sp.p[i] == sp.p[i - 1]) continue;
    const double lo = sp.p[i];
    const auto first = std::lower_bound(sp.p.begin(), sp.p.end(), lo - membership_slack);
    const auto last = std::upper_bound(sp.p.begin(), sp.p.end(), lo + width + membership_slack);
    const double mass = sp.prefix[static_cast<std::size_t>(last - sp.p.begin())] -
                        sp.prefix[static_cast<std::size_t>(first - sp.p.begin())];
    if (!found || mass > best) {
      best = mass;
      best_lo = lo;
      found = true;
    }
  }
  return {best, best_lo};
}

}  // namespace detail

/// sup of w(T) over the family's directions and every offset. Offsets are
/// swept exactly: the optimal tube can always be slid until its lower edge
/// meets a cell center, so only those offsets are candidates.
inline TubeSup sup_tube_mass(const RealGrid& w, const TubeFamily& family,
                             double cross_section = 1.0) {
  require_weight(w, "weight");
  const auto dirs = family.directions();
  std::vector<TubeSup> per_dir(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t k) {
    const Vec2 axis = perp(dirs[k]);
    const auto sp = detail::project_sorted(w, axis);
    const auto [mass, lo] = detail::best_window(sp, cross_section);
    per_dir[k].witness = {dirs[k], lo + 0.5 * cross_section, cross_section};
    per_dir[k].value = mass * w.cell_area();
  });
  TubeSup best = per_dir.empty() ? TubeSup{} : per_dir[0];
  for (std::size_t k = 1; k < per_dir.size(); ++k)
    if (per_dir[k].value > best.value) best = per_dir[k];
  if (best.value > 0.0) best.value = tube_mass(w, best.witness);
  return best;
}

// ---------------------------------------------------------------------------
// Tensor weights w(x) = w~(a x1) w~(b x2).

enum class ProfileKind { Indicator, Bump, StepTrain };

/// One-dimensional profile w~ with values in [0, 1].
///
/// Indicator: 1 on [lo, hi]. Bump: exp(-((r - center)/width)^2) on
/// |r - center| <= width, else 0. StepTrain: indicators of
/// [lo + k period, lo + k period + hi - lo] for k < count.
struct Profile {
  ProfileKind kind = ProfileKind::Indicator;
  double lo = 0.0;
  double hi = 1.0;
  double center = 0.5;
  double width = 0.5;
  double period = 2.0;
  int count = 1;

  static Profile indicator(double lo, double hi) {
    require(hi > lo, ErrorKind::InvalidArgument, "indicator profile needs hi > lo");
    Profile p;
    p.kind = ProfileKind::Indicator;
    p.lo = lo;
    p.hi = hi;
    return p;
  }
  static Profile bump(double center, double width) {
    require(width > 0.0, ErrorKind::InvalidArgument, "bump profile needs width > 0");
    Profile p;
    p.kind = ProfileKind::Bump;
    p.center = center;
    p.width = width;
    return p;
  }
  static Profile step_train(double lo, double hi, double period, int count) {
    require(hi > lo && period >= hi - lo && count >= 1, ErrorKind::InvalidArgument,
            "step train needs hi > lo, period >= hi - lo, count >= 1");
    Profile p;
    p.kind = ProfileKind::StepTrain;
    p.lo = lo;
    p.hi = hi;
    p.period = period;
    p.count = count;
    return p;
  }

  double operator()(double r) const {
    switch (kind) {
      case ProfileKind::Indicator: return r >= lo && r <= hi ? 1.0 : 0.0;
      case ProfileKind::Bump: {
        const double u = (r - center) / width;
        return std::abs(u) <= 1.0 ? std::exp(-u * u) : 0.0;
      }
      case ProfileKind::StepTrain: {
        if (r < lo) return 0.0;
        const double k = std::floor((r - lo) / period);
        if (k >= count) return 0.0;
        return r - lo - k * period <= hi - lo ? 1.0 : 0.0;
      }
    }
    return 0.0;
  }
};

struct TensorWeight {
  Profile profile;
  double a = 1.0;
  double b = 1.0;

  RealGrid realize(double half_length, std::size_t n) const {
    require(a > 0.0 && b > 0.0, ErrorKind::InvalidArgument, "tensor scales must be positive");
    RealGrid g(half_length, n);
    std::vector<double> f1(n), f2(n);
    for (std::size_t i = 0; i < n; ++i) {
      f1[i] = profile(a * g.coordinate(i));
      f2[i] = profile(b * g.coordinate(i));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = f1[i] * f2[j];
    return g;
  }

  /// The family T_{a/b} attached to this weight.
  TubeFamily family() const { return TubeFamily::slope(a / b); }
};

// ---------------------------------------------------------------------------
// Fractal-dimension functionals.

enum class FunctionalKind { BallA, BoxAA, TubeCalA };

inline const char* to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::BallA: return "ball";
    case FunctionalKind::BoxAA: return "box";
    case FunctionalKind::TubeCalA: return "tube";
  }
  return "unknown";
}

/// Lower bound of a functional on the window, with the maximizing witness.
///
/// BallA: center, R1 = R. BoxAA: center on the doubled grid, (R1, R2).
/// TubeCalA: offset of the tube center line, R1 = R.
struct FunctionalEstimate {
  FunctionalKind kind = FunctionalKind::BallA;
  double alpha = 1.0;
  double value = 0.0;
  Vec2 center;
  std::size_t center_index = 0;
  double offset = 0.0;
  Vec2 direction{1.0, 0.0};
  double R1 = 1.0;
  double R2 = 1.0;
  double witness_mass = 0.0;
  double spacing = 0.0;
  double half_length = 0.0;
};

/// Dyadic radii 1, 2, 4, ... up to the first power of two >= r_max.
inline std::vector<double> dyadic_radii(double r_max) {
  std::vector<double> out{1.0};
  while (out.back() < r_max) out.push_back(out.back() * 2.0);
  return out;
}

inline void require_functional_input(const RealGrid& H, double alpha) {
  require_unit_weight(H, "H");
  require(alpha > 0.0 && alpha <= 2.0, ErrorKind::InvalidArgument, "alpha must lie in (0, 2]");
}

namespace detail {

/// Integer stencil radius: offsets (di, dj) with di^2 + dj^2 <= (R/h)^2.
inline std::vector<long> ball_row_halfwidths(double R, double h) {
  const double r2 = (R / h) * (R / h);
  const long k = static_cast<long>(std::floor(R / h));
  std::vector<long> half(static_cast<std::size_t>(2 * k + 1));
  for (long di = -k; di <= k; ++di) {
    long dj = static_cast<long>(std::floor(std::sqrt(std::max(0.0, r2 - double(di * di)))));
    while (double((dj + 1) * (dj + 1) + di * di) <= r2) ++dj;
    while (dj >= 0 && double(dj * dj + di * di) > r2) --dj;
    half[static_cast<std::size_t>(di + k)] = dj;
  }
  return half;
}

/// Row prefix sums: out[i][j] = sum_{j' < j} H(i, j'), stride n + 1.
inline std::vector<double> row_prefix(const RealGrid& H) {
  const std::size_t n = H.size();
  std::vector<double> out(n * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * (n + 1) + j + 1] = out[i * (n + 1) + j] + H(i, j);
  return out;
}

inline double ball_sum_cells(const RealGrid& H, const std::vector<double>& rp,
                             const std::vector<long>& half, long ci, long cj) {
  const long n = static_cast<long>(H.size());
  const long k = (static_cast<long>(half.size()) - 1) / 2;
  double s = 0.0;
  for (long di = -k; di <= k; ++di) {
    const long i = ci + di;
    if (i < 0 || i >= n) continue;
    const long hw = half[static_cast<std::size_t>(di + k)];
    if (hw < 0) continue;
    const long j0 = std::max(0L, cj - hw), j1 = std::min(n - 1, cj + hw);
    if (j0 > j1) continue;
    const std::size_t row = static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1);
    s += rp[row + static_cast<std::size_t>(j1 + 1)] - rp[row + static_cast<std::size_t>(j0)];
  }
  return s;
}

}  // namespace detail

/// h^2 sum of H over cells whose centers satisfy |x - center| <= R.
inline double ball_mass(const RealGrid& H, Vec2 center, double R) {
  double s = 0.0;
  for (std::size_t k = 0; k < H.cell_count(); ++k) {
    const Vec2 d = H.center(k) - center;
    if (d.x1 * d.x1 + d.x2 * d.x2 <= R * R) s += H[k];
  }
  return s * H.cell_area();
}

/// A_alpha: max over grid centers and dyadic R in [1, 2L] of ball mass / R^alpha.
inline FunctionalEstimate ball_functional(const RealGrid& H, double alpha) {
  require_functional_input(H, alpha);
  const double h = H.spacing();
  const auto radii = dyadic_radii(2.0 * H.half_length());
  std::vector<std::vector<long>> stencils;
  for (double R : radii) stencils.push_back(detail::ball_row_halfwidths(R, h));
  const auto rp = detail::row_prefix(H);
  const std::size_t n = H.size();

  struct Best {
    double ratio = -1.0;
    std::size_t r = 0;
    double sum = 0.0;
  };
  std::vector<Best> per_center(H.cell_count());
  parallel_for(H.cell_count(), [&](std::size_t c) {
    Best b;
    for (std::size_t r = 0; r < radii.size(); ++r) {
      const double sum = detail::ball_sum_cells(H, rp, stencils[r], static_cast<long>(c / n),
                                                static_cast<long>(c % n));
      const double ratio = sum * H.cell_area() / std::pow(radii[r], alpha);
      if (ratio > b.ratio) b = {ratio, r, sum};
    }
    per_center[c] = b;
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < per_center.size(); ++c)
    if (per_center[c].ratio > per_center[best].ratio) best = c;

  FunctionalEstimate e;
  e.kind = FunctionalKind::BallA;
  e.alpha = alpha;
  e.value = std::max(0.0, per_center[best].ratio);
  e.center_index = best;
  e.center = H.center(best);
  e.R1 = e.R2 = radii[per_center[best].r];
  e.witness_mass = per_center[best].sum * H.cell_area();
  e.spacing = h;
  e.half_length = H.half_length();
  return e;
}

/// Sum-of-pairs coordinates: cell indices i + k map to u = -2L + (i + k + 1) h.
inline double doubled_coordinate(const RealGrid& H, std::size_t a) {
  return -2.0 * H.half_length() + (static_cast<double>(a) + 1.0) * H.spacing();
}

/// H x H mass of B(x, R1, R2) = {(y, z) : |y1 + z1 - x1| <= R1, |y2 + z2 - x2| <= R2},
/// summed directly over y with a rectangle sum over z.
inline double box_mass(const RealGrid& H, Vec2 x, double R1, double R2) {
  const std::size_t n = H.size();
  const double h = H.spacing(), L = H.half_length();
  // 2-D prefix sums of H.
  std::vector<double> sat((n + 1) * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sat[(i + 1) * (n + 1) + j + 1] =
          H(i, j) + sat[i * (n + 1) + j + 1] + sat[(i + 1) * (n + 1) + j] - sat[i * (n + 1) + j];
  // For y index i, z index k is admissible iff |-2L + (i + k + 1) h - x1| <= R1.
  auto range = [&](std::size_t i, double xc, double R, long& k0, long& k1) {
    const double base = -2.0 * L + (static_cast<double>(i) + 1.0) * h;
    k0 = static_cast<long>(std::ceil((xc - R - base) / h - 1e-9));
    k1 = static_cast<long>(std::floor((xc + R - base) / h + 1e-9));
    k0 = std::max(k0, 0L);
    k1 = std::min(k1, static_cast<long>(n) - 1);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    long a0, a1;
    range(i, x.x1, R1, a0, a1);
    if (a0 > a1) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (H(i, j) == 0.0) continue;
      long b0, b1;
      range(j, x.x2, R2, b0, b1);
      if (b0 > b1) continue;
      const auto A0 = static_cast<std::size_t>(a0), A1 = static_cast<std::size_t>(a1 + 1);
      const auto B0 = static_cast<std::size_t>(b0), B1 = static_cast<std::size_t>(b1 + 1);
      const double rect = sat[A1 * (n + 1) + B1] - sat[A0 * (n + 1) + B1] -
                          sat[A1 * (n + 1) + B0] + sat[A0 * (n + 1) + B0];
      total += H(i, j) * rect;
    }
  }
  return total * h * h * h * h;
}

/// Self-convolution G = H * H on the doubled grid, G[a][b] = h^4-free cell sums.
inline std::vector<double> self_convolution_cells(const RealGrid& H) {
  return fft::self_convolution(H.values(), H.size());
}

/// AA_alpha: sqrt of the max over doubled-grid centers and dyadic (R1, R2) of
/// (H x H mass of B(x, R1, R2)) / (R1 R2)^alpha.
inline FunctionalEstimate box_functional(const RealGrid& H, double alpha) {
  require_functional_input(H, alpha);
  const std::size_t n = H.size();
  const std::size_t m = 2 * n - 1;
  const double h = H.spacing();
  const double h4 = h * h * h * h;
  const auto G = self_convolution_cells(H);

  std::vector<double> sat((m + 1) * (m + 1), 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      sat[(a + 1) * (m + 1) + b + 1] = G[a * m + b] + sat[a * (m + 1) + b + 1] +
                                       sat[(a + 1) * (m + 1) + b] - sat[a * (m + 1) + b];

  const auto radii = dyadic_radii(4.0 * H.half_length());
  std::vector<long> reach(radii.size());
  for (std::size_t r = 0; r < radii.size(); ++r)
    reach[r] = static_cast<long>(std::floor(radii[r] / h + 1e-9));

  struct Best {
    double ratio = -1.0;
    std::size_t r1 = 0, r2 = 0;
  };
  std::vector<Best> per_center(m * m);
  parallel_for(m * m, [&](std::size_t c) {
    const long ca = static_cast<long>(c / m), cb = static_cast<long>(c % m);
    const long last = static_cast<long>(m) - 1;
    Best b;
    for (std::size_t r1 = 0; r1 < radii.size(); ++r1) {
      const auto a0 = static_cast<std::size_t>(std::max(0L, ca - reach[r1]));
      const auto a1 = static_cast<std::size_t>(std::min(last, ca + reach[r1]) + 1);
      for (std::size_t r2 = 0; r2 < radii.size(); ++r2) {
        const auto b0 = static_cast<std::size_t>(std::max(0L, cb - reach[r2]));
        const auto b1 = static_cast<std::size_t>(std::min(last, cb + reach[r2]) + 1);
        const double s = sat[a1 * (m + 1) + b1] - sat[a0 * (m + 1) + b1] -
                         sat[a1 * (m + 1) + b0] + sat[a0 * (m + 1) + b0];
        const double ratio = s * h4 / std::pow(radii[r1] * radii[r2], alpha);
        if (ratio > b.ratio) b = {ratio, r1, r2};
      }
    }
    per_center[c] = b;
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < per_center.size(); ++c)
    if (per_center[c].ratio > per_center[best].ratio) best = c;

  FunctionalEstimate e;
  e.kind = FunctionalKind::BoxAA;
  e.alpha = alpha;
  e.value = std::sqrt(std::max(0.0, per_center[best].ratio));
  e.center_index = best;
  e.center = {doubled_coordinate(H, best / m), doubled_coordinate(H, best % m)};
  e.R1 = radii[per_center[best].r1];
  e.R2 = radii[per_center[best].r2];
  e.witness_mass = std::max(0.0, per_center[best].ratio) * std::pow(e.R1 * e.R2, alpha);
  e.spacing = h;
  e.half_length = H.half_length();
  return e;
}

/// h^2 sum of H over cells with |x . v_perp - offset| <= R (the tube T(x, R)
/// parallel to v whose center line has the given offset).
inline double slab_mass(const RealGrid& H, Vec2 v, double offset, double R) {
  return tube_mass(H, Tube{normalized(v), offset, 2.0 * R});
}

/// Calligraphic A_alpha for direction v: max over offsets and dyadic R of
/// (mass of T(x, R)) / R^alpha. T(x, R) depends on x only through its offset.
inline FunctionalEstimate tube_functional(const RealGrid& H, double alpha, Vec2 v) {
  require_functional_input(H, alpha);
  v = normalized(v);
  const auto radii = dyadic_radii(2.0 * std::sqrt(2.0) * H.half_length());
  const auto sp = detail::project_sorted(H, perp(v));
  FunctionalEstimate e;
  e.kind = FunctionalKind::TubeCalA;
  e.alpha = alpha;
  e.spacing = H.spacing();
  e.half_length = H.half_length();
  double best = -1.0;
  for (double R : radii) {
    const auto [mass, lo] = detail::best_window(sp, 2.0 * R);
    const double ratio = mass * H.cell_area() / std::pow(R, alpha);
    if (ratio > best) {
      best = ratio;
      e.offset = lo + R;
      e.R1 = e.R2 = R;
      e.witness_mass = mass * H.cell_area();
    }
  }
  e.value = std::max(0.0, best);
  e.direction = v;
  e.center = e.offset * perp(v);
  return e;
}

/// Recomputes the ratio at the estimate's witness by an independent route.
inline double witness_ratio(const RealGrid& H, const FunctionalEstimate& e) {
  switch (e.kind) {
    case FunctionalKind::BallA: return ball_mass(H, e.center, e.R1) / std::pow(e.R1, e.alpha);
    case FunctionalKind::BoxAA:
      return std::sqrt(box_mass(H, e.center, e.R1, e.R2) / std::pow(e.R1 * e.R2, e.alpha));
    case FunctionalKind::TubeCalA:
      return slab_mass(H, e.direction, e.offset, e.R1) / std::pow(e.R1, e.alpha);
  }
  return 0.0;
}

inline FunctionalEstimate functional(FunctionalKind kind, const RealGrid& H, double alpha,
                                     Vec2 v = {1.0, 0.0}) {
  switch (kind) {
    case FunctionalKind::BallA: return ball_functional(H, alpha);
    case FunctionalKind::BoxAA: return box_functional(H, alpha);
    case FunctionalKind::TubeCalA: return tube_functional(H, alpha, v);
  }
  return {};
}

/// A_1(H_w) against min over the angular net of sup_{T in T_v} H_w(T).
struct BallTubeComparison {
  double ball_value = 0.0;
  double min_sup = 0.0;
  Vec2 minimizing_v;
  double constant = 0.0;  // ball_value / min_sup
  std::size_t directions = 0;
};

inline BallTubeComparison compare_ball_to_tubes(const RealGrid& w, double dtheta = pi / 180.0) {
  const RealGrid H = normalize_sup(w);
  BallTubeComparison out;
  out.ball_value = ball_functional(H, 1.0).value;
  const auto dirs = TubeFamily::all(dtheta).directions();
  out.directions = dirs.size();
  std::vector<double> sups(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t k) {
    sups[k] = sup_tube_mass(H, TubeFamily::perpendicular_to(dirs[k])).value;
  });
  std::size_t arg = 0;
  for (std::size_t k = 1; k < sups.size(); ++k)
    if (sups[k] < sups[arg]) arg = k;
  out.min_sup = sups.empty() ? 0.0 : sups[arg];
  out.minimizing_v = dirs.empty() ? Vec2{1.0, 0.0} : dirs[arg];
  out.constant = out.min_sup > 0.0 ? out.ball_value / out.min_sup : 0.0;
  return out;
}

}  // namespace mtlab
