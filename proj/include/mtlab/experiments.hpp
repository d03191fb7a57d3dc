#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mtlab/core.hpp"
#include "mtlab/fft.hpp"
#include "mtlab/fourier.hpp"
#include "mtlab/grid.hpp"
#include "mtlab/measures.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

/// One evaluation of int |Ef|^q w <= C sup_T w(T) ||f||^q on a window.
struct MTProbe {
  double q = 2.0;
  double half_length = 0.0;
  std::size_t resolution = 0;
  std::size_t nodes = 0;
  double lhs = 0.0;       // h^2 sum |Ef|^q w
  double lhs_half = 0.0;  // same sum over the half window |x|_inf <= L/2
  double sup_mass = 0.0;  // sup_T w(T)
  double f_norm = 0.0;    // ||f||_{L^2(sigma)}
  double rhs = 0.0;       // sup_mass f_norm^q
  double ratio = 0.0;
  Tube witness;
  /// RHS vanishes while LHS does not: contradicts the estimate unless it is a
  /// discretization artifact.
  bool failure_witness = false;
};

inline double lp_weighted(const ComplexGrid& Ef, const RealGrid& w, double q,
                          double window = INFINITY) {
  double s = 0.0;
  for (std::size_t k = 0; k < Ef.cell_count(); ++k) {
    if (w[k] == 0.0) continue;
    const Vec2 x = Ef.center(k);
    if (std::max(std::abs(x.x1), std::abs(x.x2)) > window) continue;
    s += std::pow(std::abs(Ef[k]), q) * w[k];
  }
  return s * Ef.cell_area();
}

inline MTProbe mt_ratio_from(const ComplexGrid& Ef, const DiscreteMeasure& measure,
                             const Density& f, const RealGrid& w, double q,
                             const TubeFamily& family) {
  require(q > 0.0, ErrorKind::InvalidArgument, "q must be positive");
  require_weight(w, "weight");
  MTProbe p;
  p.q = q;
  p.half_length = w.half_length();
  p.resolution = w.size();
  p.nodes = measure.size();
  p.lhs = lp_weighted(Ef, w, q);
  p.lhs_half = lp_weighted(Ef, w, q, 0.5 * w.half_length());
  const TubeSup sup = sup_tube_mass(w, family);
  p.sup_mass = sup.value;
  p.witness = sup.witness;
  p.f_norm = f.l2_norm();
  p.rhs = p.sup_mass * std::pow(p.f_norm, q);
  if (p.rhs > 0.0) {
    p.ratio = p.lhs / p.rhs;
  } else {
    p.ratio = 0.0;
    p.failure_witness = p.lhs > 0.0;
  }
  return p;
}

/// LHS and RHS of the tube-weighted extension estimate on w's grid.
inline MTProbe mt_ratio(const DiscreteMeasure& measure, const Density& f, const RealGrid& w,
                        double q, const TubeFamily& family) {
  require(max_value(w) > 0.0, ErrorKind::DegenerateWeight, "weight vanishes on the window");
  return mt_ratio_from(extend(measure, f, w), measure, f, w, q, family);
}

// ---------------------------------------------------------------------------

struct LocalGrowthRow {
  double R = 0.0;
  double lhs = 0.0;       // int_{|x| <= R} |Ef|^2 w
  double sup_all = 0.0;   // sup over the angular net of (w 1_{B_R})(T)
  double inf_v = 0.0;     // min over v of sup_{T in T_v} (w 1_{B_R})(T)
  double normalized = 0.0;  // lhs / (sup_all ||f||^2)
  double normalized_inf = 0.0;  // lhs / (inf_v ||f||^2)
};

struct LocalGrowth {
  std::vector<LocalGrowthRow> rows;
  double exponent = 0.0;  // fitted slope of log normalized against log R
  double exponent_inf = 0.0;
  double threshold = 0.6;
  bool within_threshold = true;
};

/// Growth of int_{B_R} |Ef|^2 w relative to sup_T w(T) ||f||^2 over R.
/// `w` is defined on a window containing every B_R.
inline LocalGrowth local_mt_growth(const DiscreteMeasure& measure, const Density& f,
                                   const RealGrid& w, const std::vector<double>& radii,
                                   double dtheta = pi / 180.0) {
  require(!radii.empty(), ErrorKind::InvalidArgument, "radius list is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] >= 1.0, ErrorKind::InvalidArgument, "radii must be >= 1");
    require(i == 0 || radii[i] > radii[i - 1], ErrorKind::InvalidArgument,
            "radii must be increasing");
  }
  require_weight(w, "weight");
  const ComplexGrid Ef = extend(measure, f, w);
  const double f2 = f.l2_norm() * f.l2_norm();
  const auto dirs = TubeFamily::all(dtheta).directions();
  LocalGrowth out;
  for (double R : radii) {
    RealGrid wr = w;
    for (std::size_t k = 0; k < wr.cell_count(); ++k)
      if (norm(wr.center(k)) > R) wr[k] = 0.0;
    LocalGrowthRow row;
    row.R = R;
    double s = 0.0;
    for (std::size_t k = 0; k < wr.cell_count(); ++k)
      s += std::norm(Ef[k]) * wr[k];
    row.lhs = s * wr.cell_area();
    std::vector<double> sups(dirs.size());
    parallel_for(dirs.size(), [&](std::size_t k) {
      sups[k] = sup_tube_mass(wr, TubeFamily::perpendicular_to(perp(dirs[k]))).value;
    });
    row.sup_all = sups.empty() ? 0.0 : *std::max_element(sups.begin(), sups.end());
    row.inf_v = sups.empty() ? 0.0 : *std::min_element(sups.begin(), sups.end());
    row.normalized = row.sup_all > 0.0 && f2 > 0.0 ? row.lhs / (row.sup_all * f2) : 0.0;
    row.normalized_inf = row.inf_v > 0.0 && f2 > 0.0 ? row.lhs / (row.inf_v * f2) : 0.0;
    out.rows.push_back(row);
  }
  std::vector<double> lx, ly, ly_inf;
  for (const auto& r : out.rows)
    if (r.normalized > 0.0 && r.normalized_inf > 0.0) {
      lx.push_back(std::log(r.R));
      ly.push_back(std::log(r.normalized));
      ly_inf.push_back(std::log(r.normalized_inf));
    }
  if (lx.size() >= 2) {
    out.exponent = fit_line(lx, ly).slope;
    out.exponent_inf = fit_line(lx, ly_inf).slope;
  }
  out.within_threshold = out.exponent <= out.threshold;
  return out;
}

// ---------------------------------------------------------------------------

enum class LevelSetFlavor { Tensor, Directional };

struct LevelSetProbe {
  LevelSetFlavor flavor = LevelSetFlavor::Tensor;
  double alpha = 1.0;
  double functional = 0.0;  // AA_alpha(H) or calligraphic A_alpha(H)
  double f_l1 = 0.0;
  double f_l2 = 0.0;
  std::vector<double> lambda;
  std::vector<double> mu;        // mu(G_lambda)
  std::vector<double> constant;  // c(lambda)
  double max_constant = 0.0;
};

/// mu(G_lambda) for G_lambda = {Re Ef >= lambda / 4}, dmu = H dx, against
/// ||f|| functional lambda^{-1} (tensor) or ||f||^2 functional lambda^{-2}
/// (directional), on a log grid of lambda up to 4 ||f||_{L^1}.
inline LevelSetProbe level_set_probe(const DiscreteMeasure& measure, const Density& f,
                                     const RealGrid& H, double alpha, LevelSetFlavor flavor,
                                     Vec2 v = {1.0, 0.0}, std::size_t lambda_count = 40,
                                     double lambda_floor = 1e-3) {
  require(lambda_count >= 2, ErrorKind::InvalidArgument, "need at least two lambda values");
  require(lambda_floor > 0.0 && lambda_floor < 1.0, ErrorKind::InvalidArgument,
          "lambda floor must lie in (0, 1)");
  require_unit_weight(H, "H");
  LevelSetProbe out;
  out.flavor = flavor;
  out.alpha = alpha;
  out.f_l1 = f.l1_norm();
  out.f_l2 = f.l2_norm();
  out.functional = flavor == LevelSetFlavor::Tensor ? box_functional(H, alpha).value
                                                    : tube_functional(H, alpha, v).value;
  const double top = 4.0 * out.f_l1;
  if (!(top > 0.0)) return out;
  const ComplexGrid Ef = extend(measure, f, H);
  out.lambda = log_spaced(top * lambda_floor, top, lambda_count);
  const double k = flavor == LevelSetFlavor::Tensor ? 1.0 : 2.0;
  for (double lam : out.lambda) {
    double s = 0.0;
    for (std::size_t c = 0; c < Ef.cell_count(); ++c)
      if (Ef[c].real() >= lam / 4.0) s += H[c];
    const double mu = s * H.cell_area();
    out.mu.push_back(mu);
    const double denom = std::pow(out.f_l2, k) * out.functional;
    const double c = denom > 0.0 ? mu * std::pow(lam, k) / denom : 0.0;
    out.constant.push_back(c);
    out.max_constant = std::max(out.max_constant, c);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ConvolutionBound {
  double max_abs = 0.0;      // max_x |(sigma_hat * chi_G H)(x)|
  Vec2 argmax;
  double functional = 0.0;   // calligraphic A_alpha(H)
  double ratio = 0.0;        // max_abs / functional
  ComplexGrid values;        // the convolution at every cell center
};

/// (sigma_hat * chi_G H)(x) = h^2 sum_y sigma_hat(x - y) chi_G(y) H(y) at every
/// cell center x, via sigma_hat on the difference lattice and an FFT convolution.
inline ConvolutionBound convolution_bound_probe(const DiscreteMeasure& measure,
                                                const RealGrid& H, const RealGrid& G_mask,
                                                double alpha, Vec2 v) {
  require_unit_weight(H, "H");
  require(G_mask.size() == H.size() && G_mask.half_length() == H.half_length(),
          ErrorKind::InvalidArgument, "mask and H must share a grid");
  const std::size_t n = H.size();
  const double h = H.spacing();
  const std::size_t m = 2 * n - 1;
  std::vector<double> diff(m);
  for (std::size_t a = 0; a < m; ++a)
    diff[a] = (static_cast<double>(a) - static_cast<double>(n - 1)) * h;
  std::vector<complex> coeff(measure.size());
  for (std::size_t k = 0; k < coeff.size(); ++k) coeff[k] = measure.weights[k];
  const auto kernel = detail::extend_lattice(measure, coeff, diff, diff);
  std::vector<complex> masked(n * n);
  for (std::size_t c = 0; c < n * n; ++c) masked[c] = G_mask[c] != 0.0 ? H[c] : 0.0;
  const auto full = fft::convolve(kernel, m, masked, n);
  const std::size_t fm = m + n - 1;

  ConvolutionBound out;
  out.values = ComplexGrid::like(H);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const complex val = full[(i + n - 1) * fm + (j + n - 1)] * H.cell_area();
      out.values(i, j) = val;
      if (std::abs(val) > out.max_abs) {
        out.max_abs = std::abs(val);
        out.argmax = H.center(i, j);
      }
    }
  out.functional = tube_functional(H, alpha, v).value;
  out.ratio = out.functional > 0.0 ? out.max_abs / out.functional : 0.0;
  return out;
}

// ---------------------------------------------------------------------------

/// Interval-indicator tensor weights searched over (a, b, lo, hi).
struct WeightSearchSpace {
  double a = 1.0;
  double b = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  bool vary = true;
};

struct SearchStep {
  std::size_t iteration = 0;
  std::size_t restart = 0;
  double ratio = 0.0;
};

struct SearchResult {
  MTProbe best;
  MTProbe baseline;  // f = 1 with the initial weight
  WeightSearchSpace best_weight;
  std::vector<complex> best_f;
  std::vector<SearchStep> trace;
};

/// Coordinate ascent over node phases (8 candidate phases per node, rank-one
/// updates of Ef) and over the weight parameters; restart 0 starts from f = 1,
/// later restarts from random phases. Deterministic in `seed`.
inline SearchResult extremizer_search(const DiscreteMeasure& measure, double q,
                                      const TubeFamily& family, WeightSearchSpace space,
                                      double half_length, std::size_t n, std::size_t iterations,
                                      std::uint64_t seed, std::size_t restarts = 2,
                                      bool tensor_family = true) {
  require(iterations >= 1, ErrorKind::InvalidArgument, "iterations must be >= 1");
  require(q > 0.0, ErrorKind::InvalidArgument, "q must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int phase_count = 8;

  auto realize = [&](const WeightSearchSpace& s) {
    return TensorWeight{Profile::indicator(s.lo, s.hi), s.a, s.b}.realize(half_length, n);
  };
  auto family_for = [&](const WeightSearchSpace& s) {
    return tensor_family ? TubeFamily::slope(s.a / s.b) : family;
  };

  const std::size_t nodes = measure.size();
  RealGrid shape(half_length, n);
  // Characters e_k(x) = sigma_k e^{-2 pi i x . xi_k} on the grid, one node at a time.
  auto character = [&](std::size_t k, std::vector<complex>& out) {
    out.resize(shape.cell_count());
    for (std::size_t c = 0; c < shape.cell_count(); ++c)
      out[c] = measure.weights[k] * unimodular(dot(shape.center(c), measure.nodes[k]));
  };

  SearchResult result;
  bool have_best = false;
  for (std::size_t restart = 0; restart < std::max<std::size_t>(1, restarts); ++restart) {
    std::vector<complex> f(nodes, 1.0);
    if (restart > 0)
      for (auto& z : f) z = unimodular(unit(rng));
    WeightSearchSpace ws = space;
    RealGrid w = realize(ws);
    Density dens(measure, f);
    ComplexGrid Ef = extend(measure, dens, shape);
    MTProbe current = mt_ratio_from(Ef, measure, dens, w, q, family_for(ws));
    if (restart == 0) result.baseline = current;
    if (!have_best || current.ratio > result.best.ratio) {
      result.best = current;
      result.best_weight = ws;
      result.best_f = f;
      have_best = true;
    }
    std::vector<complex> ek;
    for (std::size_t it = 0; it < iterations; ++it) {
      // Phase sweep; |f_k| = 1 keeps ||f|| and the RHS fixed, so maximize LHS.
      double lhs_now = current.lhs;
      for (std::size_t k = 0; k < nodes; ++k) {
        character(k, ek);
        const complex old = f[k];
        complex best_phase = old;
        double best_lhs = lhs_now;
        std::vector<double> cand_lhs(phase_count);
        parallel_for(phase_count, [&](std::size_t j) {
          const complex z = std::polar(1.0, two_pi * static_cast<double>(j) / phase_count);
          const complex delta = z - old;
          double s = 0.0;
          for (std::size_t c = 0; c < Ef.cell_count(); ++c)
            if (w[c] != 0.0) s += std::pow(std::abs(Ef[c] + delta * ek[c]), q) * w[c];
          cand_lhs[j] = s * Ef.cell_area();
        });
        for (int j = 0; j < phase_count; ++j)
          if (cand_lhs[static_cast<std::size_t>(j)] > best_lhs) {
            best_lhs = cand_lhs[static_cast<std::size_t>(j)];
            best_phase = std::polar(1.0, two_pi * j / phase_count);
          }
        if (best_phase != old) {
          const complex delta = best_phase - old;
          for (std::size_t c = 0; c < Ef.cell_count(); ++c) Ef[c] += delta * ek[c];
          f[k] = best_phase;
          lhs_now = best_lhs;
        }
      }
      dens = Density(measure, f);
      current = mt_ratio_from(Ef, measure, dens, w, q, family_for(ws));
      // Weight parameter moves.
      if (space.vary) {
        const double factor = std::pow(2.0, 0.25);
        std::vector<WeightSearchSpace> moves;
        for (int sgn : {+1, -1}) {
          WeightSearchSpace m1 = ws, m2 = ws, m3 = ws, m4 = ws;
          m1.a = sgn > 0 ? ws.a * factor : ws.a / factor;
          m2.b = sgn > 0 ? ws.b * factor : ws.b / factor;
          m3.lo = ws.lo + sgn * 0.1;
          m4.hi = ws.hi + sgn * 0.1;
          moves.insert(moves.end(), {m1, m2, m3, m4});
        }
        for (const auto& mv : moves) {
          if (!(mv.hi > mv.lo) || mv.a <= 0.0 || mv.b <= 0.0) continue;
          RealGrid w2 = realize(mv);
          if (!(max_value(w2) > 0.0)) continue;
          MTProbe cand = mt_ratio_from(Ef, measure, dens, w2, q, family_for(mv));
          if (cand.ratio > current.ratio) {
            current = cand;
            ws = mv;
            w = std::move(w2);
          }
        }
      }
      result.trace.push_back({it, restart, current.ratio});
      if (current.ratio > result.best.ratio) {
        result.best = current;
        result.best_weight = ws;
        result.best_f = f;
      }
    }
  }
  return result;
}

}  // namespace mtlab
