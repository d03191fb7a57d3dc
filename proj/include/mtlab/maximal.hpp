#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mtlab/core.hpp"
#include "mtlab/grid.hpp"
#include "mtlab/weights.hpp"

namespace mtlab {

/// F_N = N^{-1} 1_{B(0,N) and F <= N} F.
inline RealGrid truncate_normalize(const RealGrid& F, double N) {
  require(N >= 1.0, ErrorKind::InvalidArgument, "truncation level N must be >= 1");
  require_weight(F, "F");
  RealGrid out = RealGrid::like(F);
  for (std::size_t k = 0; k < F.cell_count(); ++k) {
    const Vec2 x = F.center(k);
    if (norm(x) <= N && F[k] <= N) out[k] = F[k] / N;
  }
  return out;
}

struct BootstrapParams {
  double alpha = 1.0;
  double beta = 0.5;
  double beta0 = 1.0;
  double C0 = 1.0;
  double M = 1.0;
  double N = 1.0;
  int k_max = 60;

  double p() const { return alpha / (alpha - beta); }

  void validate() const {
    require(beta > 0.0 && beta < alpha && alpha <= 2.0, ErrorKind::InvalidArgument,
            "bootstrap needs 0 < beta < alpha <= 2");
    require(C0 > 0.0, ErrorKind::InvalidArgument, "C0 must be positive");
    require(M > 0.0, ErrorKind::InvalidArgument, "M must be positive");
    require(beta0 > 0.0, ErrorKind::InvalidArgument, "beta0 must be positive");
    require(N >= 1.0, ErrorKind::InvalidArgument, "N must be >= 1");
    require(k_max >= 0, ErrorKind::InvalidArgument, "k_max must be >= 0");
  }
};

struct BootstrapTrace {
  BootstrapParams params;
  std::vector<double> beta;         // recursion
  std::vector<double> C;            // recursion
  std::vector<double> beta_closed;  // closed form
  std::vector<double> C_closed;     // closed form
  double beta_limit = 0.0;          // alpha
  double C_limit = 0.0;             // M^{alpha / beta}
  double max_relative_gap = 0.0;    // recursion vs closed form over all k
};

inline double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

/// beta_k = beta + beta_{k-1} / p, C_k = M C_{k-1}^{1/p}, with the closed forms
/// beta_k = beta (1 - p^{-k}) / (1 - 1/p) + beta0 p^{-k} and
/// C_k = M^{(1 - p^{-k}) / (1 - 1/p)} C0^{p^{-k}}.
inline BootstrapTrace bootstrap_sequence(const BootstrapParams& params) {
  params.validate();
  const double p = params.p();
  const auto K = static_cast<std::size_t>(params.k_max);
  BootstrapTrace t;
  t.params = params;
  t.beta.resize(K + 1);
  t.C.resize(K + 1);
  t.beta_closed.resize(K + 1);
  t.C_closed.resize(K + 1);
  t.beta[0] = params.beta0;
  t.C[0] = params.C0;
  for (std::size_t k = 1; k <= K; ++k) {
    t.beta[k] = params.beta + t.beta[k - 1] / p;
    t.C[k] = params.M * std::pow(t.C[k - 1], 1.0 / p);
  }
  const double q = 1.0 / p;
  for (std::size_t k = 0; k <= K; ++k) {
    const double qk = std::pow(q, static_cast<double>(k));
    const double geometric = (1.0 - qk) / (1.0 - q);
    t.beta_closed[k] = params.beta * geometric + params.beta0 * qk;
    t.C_closed[k] = std::pow(params.M, geometric) * std::pow(params.C0, qk);
    t.max_relative_gap = std::max({t.max_relative_gap, relative_gap(t.beta[k], t.beta_closed[k]),
                                   relative_gap(t.C[k], t.C_closed[k])});
  }
  t.beta_limit = params.beta / (1.0 - q);
  t.C_limit = std::pow(params.M, params.alpha / params.beta);
  return t;
}

/// Upper bound for Q(alpha, p) from Q(beta, p): (alpha / beta) Q_beta.
inline double exponent_transfer(double alpha, double beta, double q_beta) {
  require(beta > 0.0 && beta < alpha && alpha <= 2.0, ErrorKind::InvalidArgument,
          "exponent transfer needs 0 < beta < alpha <= 2");
  require(q_beta > 0.0, ErrorKind::InvalidArgument, "Q_beta must be positive");
  return alpha / beta * q_beta;
}

/// Pointwise power F^e with 0^e = 0.
inline RealGrid pointwise_power(const RealGrid& F, double e) {
  RealGrid out = F;
  for (double& v : out.values()) v = v > 0.0 ? std::pow(v, e) : 0.0;
  return out;
}

inline double weighted_integral(const RealGrid& F, const RealGrid& H) {
  double s = 0.0;
  for (std::size_t k = 0; k < F.cell_count(); ++k) s += F[k] * H[k];
  return s * F.cell_area();
}

struct HolderStepReport {
  double functional_alpha = 0.0;  // functional_alpha(H)
  double functional_beta = 0.0;   // functional_beta(F_N^{beta0/p} H)
  double C0_measured = 0.0;       // int F_N^{beta0} H / functional_alpha(H)
  double C0_reference = 0.0;      // (2N)^alpha, the crude seed constant
  double rhs = 0.0;               // C0_measured^{1/p} functional_alpha(H)
  double ratio = 0.0;             // functional_beta / rhs (0 when both vanish)
  double slack = 1.05;
  bool holds = true;
};

/// Checks functional_beta(F_N^{beta0/p} H) <= C0^{1/p} functional_alpha(H) with
/// both functionals computed on the same centers and radii.
inline HolderStepReport holder_step_verify(const RealGrid& F, const RealGrid& H,
                                           const BootstrapParams& params, FunctionalKind kind,
                                           Vec2 v = {1.0, 0.0}, double slack = 1.05) {
  params.validate();
  require(F.size() == H.size() && F.half_length() == H.half_length(),
          ErrorKind::InvalidArgument, "F and H must share a grid");
  const double p = params.p();
  HolderStepReport r;
  r.slack = slack;
  r.functional_alpha = functional(kind, H, params.alpha, v).value;
  if (!(r.functional_alpha > 0.0))
    throw Error(ErrorKind::DegenerateWeight, "functional of H vanishes on the window");
  const RealGrid FN = truncate_normalize(F, params.N);
  const RealGrid upgraded = pointwise_product(pointwise_power(FN, params.beta0 / p), H);
  r.functional_beta = functional(kind, upgraded, params.beta, v).value;
  r.C0_measured = weighted_integral(pointwise_power(FN, params.beta0), H) / r.functional_alpha;
  r.C0_reference = std::pow(2.0 * params.N, params.alpha);
  r.rhs = std::pow(r.C0_measured, 1.0 / p) * r.functional_alpha;
  r.ratio = r.rhs > 0.0 ? r.functional_beta / r.rhs : (r.functional_beta > 0.0 ? INFINITY : 0.0);
  r.holds = r.ratio <= slack;
  return r;
}

struct Candidate {
  std::string name;
  RealGrid H;
};

struct CandidateValue {
  std::string name;
  double functional = 0.0;
  double integral = 0.0;  // int F^alpha H
  double ratio = 0.0;     // integral / functional, or 0 when excluded
  bool admissible = false;
};

struct MaximalProbe {
  FunctionalKind flavor = FunctionalKind::BallA;
  double alpha = 1.0;
  double lower_bound = 0.0;  // (max ratio)^{1/alpha}
  std::size_t best = 0;
  std::vector<CandidateValue> table;
};

/// Lower bound of the dimensional maximal function over a finite candidate set.
inline MaximalProbe maximal_lower_bound(const RealGrid& F, double alpha, FunctionalKind flavor,
                                        const std::vector<Candidate>& candidates,
                                        Vec2 v = {1.0, 0.0}) {
  require(!candidates.empty(), ErrorKind::InvalidArgument, "candidate set is empty");
  require_weight(F, "F");
  MaximalProbe probe;
  probe.flavor = flavor;
  probe.alpha = alpha;
  probe.table.resize(candidates.size());
  const RealGrid Fa = pointwise_power(F, alpha);
  parallel_for(candidates.size(), [&](std::size_t c) {
    CandidateValue& cv = probe.table[c];
    cv.name = candidates[c].name;
    cv.functional = functional(flavor, candidates[c].H, alpha, v).value;
    cv.integral = weighted_integral(Fa, candidates[c].H);
    cv.admissible = cv.functional > 0.0 && std::isfinite(cv.functional);
    cv.ratio = cv.admissible ? cv.integral / cv.functional : 0.0;
  });
  bool any = false;
  double best = 0.0;
  for (std::size_t c = 0; c < probe.table.size(); ++c) {
    if (!probe.table[c].admissible) continue;
    if (!any || probe.table[c].ratio > best) {
      best = probe.table[c].ratio;
      probe.best = c;
    }
    any = true;
  }
  if (!any) throw Error(ErrorKind::DegenerateWeight, "every candidate weight is degenerate");
  probe.lower_bound = std::pow(std::max(0.0, best), 1.0 / alpha);
  return probe;
}

/// Indicator balls B(0, R), horizontal and vertical 1-tubes through the origin,
/// boxes [0, R]^2 at dyadic R, and a two-cell sum, all on F's grid.
inline std::vector<Candidate> standard_candidates(const RealGrid& shape) {
  std::vector<Candidate> out;
  const double L = shape.half_length();
  for (double R : dyadic_radii(L)) {
    if (R > 2.0 * L) break;
    const std::string r = std::to_string(static_cast<long>(R));
    out.push_back({"ball R=" + r, RealGrid::sample(L, shape.size(), [R](Vec2 x) {
                     return norm(x) <= R ? 1.0 : 0.0;
                   })});
    out.push_back({"box R=" + r, RealGrid::sample(L, shape.size(), [R](Vec2 x) {
                     return x.x1 >= 0.0 && x.x1 <= R && x.x2 >= 0.0 && x.x2 <= R ? 1.0 : 0.0;
                   })});
  }
  out.push_back({"tube horizontal", RealGrid::sample(L, shape.size(), [](Vec2 x) {
                   return std::abs(x.x2) <= 0.5 ? 1.0 : 0.0;
                 })});
  out.push_back({"tube vertical", RealGrid::sample(L, shape.size(), [](Vec2 x) {
                   return std::abs(x.x1) <= 0.5 ? 1.0 : 0.0;
                 })});
  RealGrid two = RealGrid::like(shape);
  const std::size_t mid = shape.size() / 2;
  two(mid, mid) = 1.0;
  two(mid / 2, mid / 2) = 1.0;
  out.push_back({"two-point", std::move(two)});
  return out;
}

/// Adds the bootstrap upgrades F_N^{beta_{k-1}/p} H, k = 1..K, of every
/// candidate H; these are the weights through which an alpha-candidate
/// certifies a beta-lower bound.
inline std::vector<Candidate> with_bootstrap_upgrades(const RealGrid& F,
                                                      const std::vector<Candidate>& base,
                                                      const BootstrapParams& params, int K) {
  params.validate();
  const double p = params.p();
  const RealGrid FN = truncate_normalize(F, params.N);
  std::vector<Candidate> out = base;
  double beta_prev = params.beta0;
  for (int k = 1; k <= K; ++k) {
    const RealGrid factor = pointwise_power(FN, beta_prev / p);
    for (const auto& c : base)
      out.push_back({c.name + " upgrade k=" + std::to_string(k), pointwise_product(factor, c.H)});
    beta_prev = params.beta + beta_prev / p;
  }
  return out;
}

}  // namespace mtlab
