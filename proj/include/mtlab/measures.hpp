#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mtlab/core.hpp"
#include "mtlab/quadrature.hpp"

namespace mtlab {

enum class CurveKind { Circle, FlatSegment, ConvexGraph };

using RealFunction = std::function<double(double)>;

/// A curve S together with the recipe for its measure.
///
/// ConvexGraph curves are graphs (t, gamma(t)) on (0, c] carrying the measure
/// gamma''(t)^{1/2} dt. gamma1..gamma3 are optional; when empty the hypothesis
/// checker falls back to central differences.
struct CurveSpec {
  CurveKind kind = CurveKind::Circle;
  RealFunction gamma, gamma1, gamma2, gamma3;
  double domain_end = 1.0;
  std::string family = "circle";
  double family_param = 0.0;
};

inline CurveSpec circle_curve() {
  CurveSpec s;
  s.kind = CurveKind::Circle;
  s.domain_end = two_pi;
  s.family = "circle";
  return s;
}

inline CurveSpec flat_segment_curve() {
  CurveSpec s;
  s.kind = CurveKind::FlatSegment;
  s.gamma = [](double) { return 0.0; };
  s.gamma1 = s.gamma2 = s.gamma3 = s.gamma;
  s.domain_end = 1.0;
  s.family = "flat";
  return s;
}

/// gamma(t) = exp(-1/t^m) on (0, c], exponentially flat at the origin.
inline CurveSpec exp_flat_curve(double m, double c) {
  require(m > 0.0, ErrorKind::InvalidArgument, "exp-flat exponent m must be positive");
  require(c > 0.0, ErrorKind::InvalidArgument, "domain end c must be positive");
  CurveSpec s;
  s.kind = CurveKind::ConvexGraph;
  s.domain_end = c;
  s.family = "expflat";
  s.family_param = m;
  // gamma = e^{-u} with u = t^{-m}; derivatives of u are closed form.
  auto u1 = [m](double t) { return -m * std::pow(t, -m - 1.0); };
  auto u2 = [m](double t) { return m * (m + 1.0) * std::pow(t, -m - 2.0); };
  auto u3 = [m](double t) { return -m * (m + 1.0) * (m + 2.0) * std::pow(t, -m - 3.0); };
  s.gamma = [m](double t) { return std::exp(-std::pow(t, -m)); };
  s.gamma1 = [m, u1](double t) { return -u1(t) * std::exp(-std::pow(t, -m)); };
  s.gamma2 = [m, u1, u2](double t) {
    const double a = u1(t);
    return (a * a - u2(t)) * std::exp(-std::pow(t, -m));
  };
  s.gamma3 = [m, u1, u2, u3](double t) {
    const double a = u1(t), b = u2(t);
    return (-a * a * a + 3.0 * a * b - u3(t)) * std::exp(-std::pow(t, -m));
  };
  return s;
}

/// gamma(t) = t^p on (0, c].
inline CurveSpec power_curve(double p, double c, bool with_derivatives = true) {
  require(p >= 2.0, ErrorKind::InvalidArgument, "power curve needs p >= 2 for convexity");
  require(c > 0.0, ErrorKind::InvalidArgument, "domain end c must be positive");
  CurveSpec s;
  s.kind = CurveKind::ConvexGraph;
  s.domain_end = c;
  s.family = "power";
  s.family_param = p;
  s.gamma = [p](double t) { return std::pow(t, p); };
  if (with_derivatives) {
    s.gamma1 = [p](double t) { return p * std::pow(t, p - 1.0); };
    s.gamma2 = [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); };
    s.gamma3 = [p](double t) {
      return p == 2.0 ? 0.0 : p * (p - 1.0) * (p - 2.0) * std::pow(t, p - 3.0);
    };
  }
  return s;
}

/// Quadrature representation of a curve measure: sum_i sigma_i delta_{xi_i}.
struct DiscreteMeasure {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  double total_mass = 0.0;
  /// Mass of the density on (0, t_min) that the truncated quadrature omits.
  double omitted_mass = 0.0;
  CurveSpec source;

  std::size_t size() const { return nodes.size(); }

  /// Diameter of the node set's bounding box.
  double diameter() const {
    if (nodes.empty()) return 0.0;
    double lo1 = nodes[0].x1, hi1 = lo1, lo2 = nodes[0].x2, hi2 = lo2;
    for (const auto& p : nodes) {
      lo1 = std::min(lo1, p.x1);
      hi1 = std::max(hi1, p.x1);
      lo2 = std::min(lo2, p.x2);
      hi2 = std::max(hi2, p.x2);
    }
    return std::hypot(hi1 - lo1, hi2 - lo2);
  }
};

/// Node count that resolves e^{-2 pi i x.xi} for |x| <= x_max.
inline std::size_t recommended_nodes(double diameter, double x_max) {
  return static_cast<std::size_t>(std::ceil(20.0 * (1.0 + diameter * x_max)));
}

inline double sum_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

/// Arc length measure on the unit circle, equispaced nodes.
inline DiscreteMeasure make_circle_measure(std::size_t n) {
  require(n >= 8, ErrorKind::InvalidArgument, "circle measure needs at least 8 nodes");
  DiscreteMeasure m;
  m.source = circle_curve();
  m.nodes.resize(n);
  m.weights.assign(n, two_pi / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = two_pi * static_cast<double>(i) / static_cast<double>(n);
    m.nodes[i] = {std::cos(theta), std::sin(theta)};
  }
  m.total_mass = sum_of(m.weights);
  return m;
}

/// dt on the segment [0,1] x {0}, Gauss-Legendre nodes.
inline DiscreteMeasure make_flat_segment_measure(std::size_t n) {
  require(n >= 2, ErrorKind::InvalidArgument, "flat segment measure needs at least 2 nodes");
  DiscreteMeasure m;
  m.source = flat_segment_curve();
  const QuadratureRule rule = gauss_legendre(n, 0.0, 1.0);
  m.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.nodes[i] = {rule.nodes[i], 0.0};
  m.weights = rule.weights;
  m.total_mass = sum_of(m.weights);
  return m;
}

/// Single atom of mass `mass` at `point`; its transform has constant modulus.
inline DiscreteMeasure make_point_measure(Vec2 point, double mass = 1.0) {
  require(mass > 0.0, ErrorKind::InvalidArgument, "point mass must be positive");
  DiscreteMeasure m;
  m.source.kind = CurveKind::FlatSegment;
  m.source.family = "point";
  m.nodes = {point};
  m.weights = {mass};
  m.total_mass = mass;
  return m;
}

/// Breakpoints c, c/2, c/4, ... refined geometrically toward t_min.
/// With t_min == 0 the refinement stops at c 2^-40 and a final panel reaches 0.
inline std::vector<double> geometric_panels(double c, double t_min) {
  std::vector<double> edges{c};
  const double floor = t_min > 0.0 ? 2.0 * t_min : c * std::ldexp(1.0, -40);
  while (edges.back() * 0.5 > floor) edges.push_back(edges.back() * 0.5);
  edges.push_back(t_min);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

/// Composite Gauss-Legendre quadrature of gamma''(t)^{1/2} dt on [t_min, c],
/// nodes (t_i, gamma(t_i)). `n` is the node budget shared by the panels.
///
/// Nodes whose density underflows to exactly zero carry no mass and are
/// dropped, so every stored weight is positive.
inline DiscreteMeasure make_convex_graph_measure(const CurveSpec& spec, std::size_t n,
                                                 double t_min) {
  require(spec.kind == CurveKind::ConvexGraph, ErrorKind::InvalidArgument,
          "convex graph measure needs a ConvexGraph curve");
  require(n >= 8, ErrorKind::InvalidArgument, "convex graph measure needs at least 8 nodes");
  const double c = spec.domain_end;
  require(t_min >= 0.0 && t_min < c, ErrorKind::InvalidArgument,
          "t_min must lie in [0, domain_end)");
  require(static_cast<bool>(spec.gamma) && static_cast<bool>(spec.gamma2),
          ErrorKind::InvalidArgument, "convex graph measure needs gamma and gamma''");

  const std::vector<double> edges = geometric_panels(c, t_min);
  const std::size_t panels = edges.size() - 1;
  const std::size_t per_panel = std::max<std::size_t>(4, n / panels);

  DiscreteMeasure m;
  m.source = spec;
  for (std::size_t k = 0; k < panels; ++k) {
    const QuadratureRule rule = gauss_legendre(per_panel, edges[k], edges[k + 1]);
    for (std::size_t i = 0; i < per_panel; ++i) {
      const double t = rule.nodes[i];
      const double g2 = spec.gamma2(t);
      if (!(g2 >= 0.0))
        throw Error(ErrorKind::HypothesisViolation,
                    "gamma'' < 0 at t = " + std::to_string(t) + " (curve is not convex)");
      const double w = std::sqrt(g2) * rule.weights[i];
      if (w == 0.0) continue;
      m.nodes.push_back({t, spec.gamma(t)});
      m.weights.push_back(w);
    }
  }
  require(!m.weights.empty(), ErrorKind::HypothesisViolation,
          "density gamma''^{1/2} vanishes on every node");
  m.total_mass = sum_of(m.weights);

  if (t_min > 0.0) {
    const QuadratureRule tail = gauss_legendre(32, 0.0, t_min);
    double omitted = 0.0;
    for (std::size_t i = 0; i < tail.nodes.size(); ++i)
      omitted += std::sqrt(std::max(0.0, spec.gamma2(tail.nodes[i]))) * tail.weights[i];
    m.omitted_mass = omitted;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Hypothesis checks for convex graphs.

struct ConditionCheck {
  std::string name;
  std::vector<bool> pass;
  /// value(t) / max_t |value|, sign-adjusted so that >= -tol means "holds".
  std::vector<double> margin;
  double worst_margin = 0.0;
  std::size_t violations = 0;
  /// First offending t, or NaN when the condition holds everywhere.
  double first_violation = std::numeric_limits<double>::quiet_NaN();
};

struct HypothesisReport {
  std::vector<double> t;
  ConditionCheck gamma_convex;    // gamma'' >= 0
  ConditionCheck gamma1_convex;   // gamma''' >= 0, or second differences of gamma'
  ConditionCheck ratio_monotone;  // (gamma''^{1/2} / gamma')' <= 0
  /// gamma and gamma' vanish at least linearly as t -> t_min.
  bool boundary_ok = false;
  double gamma_at_t_min_ratio = 0.0;   // gamma(t_min) / gamma(c)
  double gamma1_at_t_min_ratio = 0.0;  // gamma'(t_min) / gamma'(c)
  std::vector<double> flatness;        // gamma gamma'' / gamma'^2
  double constant_c = 0.0;             // max of flatness
  double tolerance = 1e-9;
  bool used_finite_differences = false;

  std::size_t violations() const {
    return gamma_convex.violations + gamma1_convex.violations + ratio_monotone.violations +
           (boundary_ok ? 0 : 1);
  }
  bool all_passed() const { return violations() == 0; }
};

namespace detail {

struct CurveDerivatives {
  const CurveSpec& spec;
  double rel_step;

  double step(double t) const { return rel_step * t; }
  double d1(double t) const {
    if (spec.gamma1) return spec.gamma1(t);
    const double h = step(t);
    return (spec.gamma(t + h) - spec.gamma(t - h)) / (2.0 * h);
  }
  double d2(double t) const {
    if (spec.gamma2) return spec.gamma2(t);
    const double h = step(t);
    return (spec.gamma(t + h) - 2.0 * spec.gamma(t) + spec.gamma(t - h)) / (h * h);
  }
  double d3(double t) const {
    if (spec.gamma3) return spec.gamma3(t);
    const double h = step(t);
    if (spec.gamma2) return (spec.gamma2(t + h) - spec.gamma2(t - h)) / (2.0 * h);
    return (spec.gamma(t + 2.0 * h) - 2.0 * spec.gamma(t + h) + 2.0 * spec.gamma(t - h) -
            spec.gamma(t - 2.0 * h)) /
           (2.0 * h * h * h);
  }
};

// `noise` is an optional per-point rounding allowance for finite-difference values.
inline void finalize(ConditionCheck& check, const std::vector<double>& value,
                     const std::vector<double>& t, double sign, double tol,
                     const std::vector<double>& noise = {}) {
  double scale = 0.0;
  for (double v : value) scale = std::max(scale, std::abs(v));
  check.pass.resize(value.size());
  check.margin.resize(value.size());
  check.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < value.size(); ++i) {
    const double m = scale > 0.0 ? sign * value[i] / scale : 0.0;
    check.margin[i] = m;
    const double allowance = noise.empty() || scale == 0.0 ? 0.0 : noise[i] / scale;
    check.pass[i] = m >= -(tol + allowance);
    check.worst_margin = std::min(check.worst_margin, m);
    if (!check.pass[i]) {
      if (check.violations == 0) check.first_violation = t[i];
      ++check.violations;
    }
  }
  if (value.empty()) check.worst_margin = 0.0;
}

}  // namespace detail

/// Smallest t in (0, c] where gamma and gamma' are representable (>= floor).
inline double representable_t_min(const CurveSpec& spec, double floor = 1e-280) {
  require(spec.kind == CurveKind::ConvexGraph, ErrorKind::InvalidArgument,
          "representable_t_min needs a ConvexGraph curve");
  detail::CurveDerivatives d{spec, 1e-4};
  auto ok = [&](double t) { return spec.gamma(t) >= floor && d.d1(t) >= floor; };
  double hi = spec.domain_end;
  if (!ok(hi)) return hi;
  double lo = hi * 1e-12;
  if (ok(lo)) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Samples the conditions of the convex-curve corollary on `grid_size`
/// log-spaced points of [t_min, c]. Derivatives without closed forms are
/// replaced by central differences with relative step `rel_step`.
inline HypothesisReport check_corollary_hypotheses(const CurveSpec& spec, std::size_t grid_size,
                                                   double t_min, double tol = 1e-9,
                                                   double rel_step = 1e-3) {
  require(spec.kind == CurveKind::ConvexGraph, ErrorKind::InvalidArgument,
          "hypothesis check needs a ConvexGraph curve");
  require(static_cast<bool>(spec.gamma), ErrorKind::InvalidArgument, "curve needs gamma");
  require(grid_size >= 2, ErrorKind::InvalidArgument, "hypothesis grid needs >= 2 points");
  require(t_min > 0.0 && t_min < spec.domain_end, ErrorKind::InvalidArgument,
          "t_min must lie in (0, domain_end)");

  HypothesisReport r;
  r.tolerance = tol;
  r.used_finite_differences = !(spec.gamma1 && spec.gamma2 && spec.gamma3);
  r.t = log_spaced(t_min, spec.domain_end, grid_size);
  // Central differences must not leave (0, c]; keep the stencil inside.
  if (r.used_finite_differences) {
    r.t.back() = spec.domain_end * (1.0 - 3.0 * rel_step);
  }
  detail::CurveDerivatives d{spec, rel_step};

  const std::size_t n = r.t.size();
  std::vector<double> g(n), g1(n), g2(n), g3(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = r.t[i];
    g[i] = spec.gamma(t);
    g1[i] = d.d1(t);
    g2[i] = d.d2(t);
    g3[i] = d.d3(t);
    if (g1[i] == 0.0)
      throw Error(ErrorKind::Singularity, "gamma'(t) = 0 at t = " + std::to_string(t));
  }

  r.gamma_convex.name = "gamma convex";
  detail::finalize(r.gamma_convex, g2, r.t, +1.0, tol);

  r.gamma1_convex.name = "gamma' convex";
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (spec.gamma3) {
    detail::finalize(r.gamma1_convex, g3, r.t, +1.0, tol);
  } else if (spec.gamma2) {
    std::vector<double> noise(n);
    for (std::size_t i = 0; i < n; ++i) noise[i] = 8.0 * eps * std::abs(g2[i]) / d.step(r.t[i]);
    detail::finalize(r.gamma1_convex, g3, r.t, +1.0, tol, noise);
  } else {
    // Second differences of gamma' on the (nonuniform) sample grid.
    std::vector<double> dd(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = r.t[i] - r.t[i - 1], hr = r.t[i + 1] - r.t[i];
      dd[i] = 2.0 * ((g1[i + 1] - g1[i]) / hr - (g1[i] - g1[i - 1]) / hl) / (hl + hr);
    }
    // Rounding in the central difference for gamma' is about eps |gamma| / h.
    auto g1_noise = [&](std::size_t i) {
      return spec.gamma1 ? 4.0 * eps * std::abs(g1[i]) : 8.0 * eps * std::abs(g[i]) / d.step(r.t[i]);
    };
    std::vector<double> noise(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = r.t[i] - r.t[i - 1], hr = r.t[i + 1] - r.t[i];
      noise[i] = 4.0 * std::max({g1_noise(i - 1), g1_noise(i), g1_noise(i + 1)}) / (hl * hr);
    }
    detail::finalize(r.gamma1_convex, dd, r.t, +1.0, tol, noise);
  }

  // (gamma''^{1/2}/gamma')' = (sqrt(g2)/g1) * (g3 / (2 g2) - g2 / g1), in ratio
  // form so exponentially small curves do not underflow.
  std::vector<double> mono(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (g2[i] > 0.0) {
      mono[i] = (std::sqrt(g2[i]) / g1[i]) * (g3[i] / (2.0 * g2[i]) - g2[i] / g1[i]);
    } else {
      mono[i] = g3[i] > 0.0 ? 1.0 : (g3[i] < 0.0 ? -1.0 : 0.0);
    }
  }
  r.ratio_monotone.name = "(gamma''^{1/2}/gamma')' <= 0";
  detail::finalize(r.ratio_monotone, mono, r.t, -1.0, tol);

  r.flatness.resize(n);
  r.constant_c = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    r.flatness[i] = (g[i] / g1[i]) * (g2[i] / g1[i]);
    r.constant_c = std::max(r.constant_c, r.flatness[i]);
  }

  r.gamma_at_t_min_ratio = g.front() / g.back();
  r.gamma1_at_t_min_ratio = g1.front() / g1.back();
  const double linear = 10.0 * t_min / spec.domain_end;
  bool monotone_toward_zero = true;
  for (std::size_t i = 1; i < n; ++i)
    if (g[i - 1] > g[i] * (1.0 + tol) || g1[i - 1] > g1[i] * (1.0 + tol))
      monotone_toward_zero = false;
  r.boundary_ok = monotone_toward_zero && r.gamma_at_t_min_ratio <= linear &&
                  r.gamma1_at_t_min_ratio <= linear && g.front() >= 0.0 && g1.front() >= 0.0;
  return r;
}

}  // namespace mtlab
