#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mtlab/core.hpp"
#include "mtlab/experiments.hpp"
#include "mtlab/fourier.hpp"
#include "mtlab/grid.hpp"
#include "mtlab/io.hpp"
#include "mtlab/maximal.hpp"
#include "mtlab/measures.hpp"
#include "mtlab/weights.hpp"

namespace mtlab::commands {

using io::json;

inline Vec2 vec2_of(const json& j) { return {j[0].get<double>(), j[1].get<double>()}; }

// ---------------------------------------------------------------------------
// Builders from a validated config.

inline CurveSpec curve_from_config(const json& cfg) {
  const json& m = cfg["measure"];
  const std::string kind = m["kind"].get<std::string>();
  const double c = m["c"].get<double>();
  if (kind == "expflat") return exp_flat_curve(m["m"].get<double>(), c);
  if (kind == "power") return power_curve(m["p"].get<double>(), c);
  if (kind == "circle") return circle_curve();
  if (kind == "flat") return flat_segment_curve();
  throw Error(ErrorKind::InvalidArgument, "measure kind \"" + kind + "\" is not a curve");
}

/// t_min for a convex graph: the configured value, or 1e-4 c raised to where
/// gamma and gamma' are still representable.
inline double t_min_from_config(const json& cfg, const CurveSpec& spec) {
  const json& t = cfg["measure"]["t_min"];
  if (!t.is_null()) return t.get<double>();
  return std::max(1e-4 * spec.domain_end, representable_t_min(spec));
}

inline DiscreteMeasure measure_from_config(const json& cfg) {
  const json& m = cfg["measure"];
  const std::string kind = m["kind"].get<std::string>();
  const auto nodes = m["nodes"].get<std::size_t>();
  if (kind == "circle") return make_circle_measure(nodes);
  if (kind == "flat") return make_flat_segment_measure(nodes);
  if (kind == "point") return make_point_measure({0.0, 0.0});
  const CurveSpec spec = curve_from_config(cfg);
  return make_convex_graph_measure(spec, nodes, t_min_from_config(cfg, spec));
}

inline Density density_from_config(const json& cfg, const DiscreteMeasure& measure) {
  const std::string kind = cfg["f"]["kind"].get<std::string>();
  if (kind == "random") return Density::random_phases(measure, cfg["seed"].get<std::uint64_t>());
  if (kind == "focused") return Density::focused(measure, vec2_of(cfg["f"]["x0"]));
  return Density::constant(measure);
}

inline Profile profile_from_config(const json& p) {
  const std::string kind = p["kind"].get<std::string>();
  if (kind == "bump") return Profile::bump(p["center"].get<double>(), p["width"].get<double>());
  if (kind == "steps")
    return Profile::step_train(p["lo"].get<double>(), p["hi"].get<double>(),
                               p["period"].get<double>(), p["count"].get<int>());
  return Profile::indicator(p["lo"].get<double>(), p["hi"].get<double>());
}

inline TensorWeight tensor_from_config(const json& cfg) {
  const json& w = cfg["weight"];
  return {profile_from_config(w["profile"]), w["a"].get<double>(), w["b"].get<double>()};
}

inline RealGrid weight_from_config(const json& cfg) {
  const double L = cfg["grid"]["L"].get<double>();
  const auto n = cfg["grid"]["n"].get<std::size_t>();
  const json& w = cfg["weight"];
  const std::string kind = w["kind"].get<std::string>();
  if (kind == "tensor") return tensor_from_config(cfg).realize(L, n);
  if (kind == "zero") return RealGrid(L, n, 0.0);
  if (kind == "tube") {
    const double s = w["offset"].get<double>();
    return RealGrid::sample(L, n, [s](Vec2 x) { return std::abs(x.x2 - s) <= 0.5 ? 1.0 : 0.0; });
  }
  if (kind == "ball") {
    const double r = w["radius"].get<double>();
    return RealGrid::sample(L, n, [r](Vec2 x) { return norm(x) <= r ? 1.0 : 0.0; });
  }
  return RealGrid(L, n, 1.0);
}

inline TubeFamily family_from_config(const json& cfg) {
  const json& f = cfg["family"];
  const std::string kind = f["kind"].get<std::string>();
  if (kind == "slope") return TubeFamily::slope(f["m"].get<double>());
  if (kind == "all") return TubeFamily::all(f["dtheta"].get<double>());
  if (kind == "tensor") return tensor_from_config(cfg).family();
  return TubeFamily::perpendicular_to(vec2_of(f["v"]));
}

inline FunctionalKind functional_kind_of(const std::string& s) {
  if (s == "box") return FunctionalKind::BoxAA;
  if (s == "tube") return FunctionalKind::TubeCalA;
  return FunctionalKind::BallA;
}

// ---------------------------------------------------------------------------

struct Outcome {
  io::Report report;
  std::string summary;
};

inline void grid_metadata(io::Report& r, const RealGrid& g) {
  r.metadata["L"] = g.half_length();
  r.metadata["n"] = g.size();
  r.metadata["h"] = g.spacing();
}

inline void measure_metadata(io::Report& r, const DiscreteMeasure& m) {
  r.metadata["nodes"] = m.size();
  r.metadata["total_mass"] = m.total_mass;
  r.metadata["omitted_mass"] = m.omitted_mass;
}

inline std::string fmt(double v) { return io::format_double(v); }

inline Outcome run_decay(const json& cfg) {
  const DiscreteMeasure measure = measure_from_config(cfg);
  const json& d = cfg["decay"];
  const std::string regime_name = d["regime"].get<std::string>();
  const double lo = d["lo"].get<double>(), hi = d["hi"].get<double>();
  const auto count = d["samples"].get<std::size_t>();
  DecayRegime regime = DecayRegime::Directional;
  Vec2 v = normalized(vec2_of(d["v"]));
  std::vector<DecaySample> samples;
  if (regime_name == "tensor-product") {
    regime = DecayRegime::TensorProduct;
    samples = sample_diagonal(measure, std::sqrt(lo), std::sqrt(hi), count);
  } else if (regime_name == "tensor-axis1") {
    regime = DecayRegime::TensorAxis1;
    samples = sample_ray(measure, {1.0, 0.0}, lo, hi, count);
  } else if (regime_name == "tensor-axis2") {
    regime = DecayRegime::TensorAxis2;
    samples = sample_ray(measure, {0.0, 1.0}, lo, hi, count);
  } else {
    samples = sample_ray(measure, v, lo, hi, count);
  }
  const DecayFit fit = fit_decay(samples, regime, v);
  Outcome out;
  out.report.kind = "decay";
  out.report.config = cfg;
  out.report.label("regime", to_string(regime));
  out.report.scalar("delta_hat", fit.exponent);
  out.report.scalar("constant", fit.constant);
  out.report.scalar("residual", fit.residual);
  out.report.scalar("gauge_min", fit.gauge_min);
  out.report.scalar("gauge_max", fit.gauge_max);
  out.report.scalar("used", static_cast<double>(fit.used));
  out.report.scalar("dropped_zero", static_cast<double>(fit.dropped_zero));
  out.report.scalar("dropped_region", static_cast<double>(fit.dropped_region));
  io::Table t{"samples", {"gauge", "abs_sigma_hat"}, {}};
  for (const auto& s : samples) {
    const double g = decay_gauge(s.x, regime, v);
    if (g > 0.0) t.add_row({g, s.value});
  }
  out.report.tables.push_back(std::move(t));
  measure_metadata(out.report, measure);
  out.summary = "delta_hat = " + fmt(fit.exponent) + " (" + to_string(regime) + ", " +
                std::to_string(fit.used) + " samples)";
  return out;
}

inline Outcome run_functional(const json& cfg) {
  const RealGrid H = normalize_sup(weight_from_config(cfg));
  const double alpha = cfg["params"]["alpha"].get<double>();
  const FunctionalKind kind = functional_kind_of(cfg["functional"]["kind"].get<std::string>());
  const FunctionalEstimate e = functional(kind, H, alpha, vec2_of(cfg["functional"]["v"]));
  Outcome out;
  out.report.kind = "functional";
  out.report.config = cfg;
  out.report.label("functional", to_string(kind));
  out.report.scalar("value", e.value);
  out.report.scalar("alpha", alpha);
  out.report.scalar("witness_x1", e.center.x1);
  out.report.scalar("witness_x2", e.center.x2);
  out.report.scalar("witness_R1", e.R1);
  out.report.scalar("witness_R2", e.R2);
  out.report.scalar("witness_ratio", witness_ratio(H, e));
  grid_metadata(out.report, H);
  out.summary = std::string(to_string(kind)) + " functional = " + fmt(e.value) +
                " at R = " + fmt(e.R1) + (kind == FunctionalKind::BoxAA ? "x" + fmt(e.R2) : "");
  return out;
}

inline BootstrapParams bootstrap_params_from_config(const json& cfg) {
  const json& p = cfg["params"];
  BootstrapParams bp;
  bp.alpha = p["alpha"].get<double>();
  bp.beta = p["beta"].get<double>();
  bp.beta0 = p["beta0"].get<double>();
  bp.C0 = p["C0"].get<double>();
  bp.M = p["M"].get<double>();
  bp.N = p["N"].get<double>();
  bp.k_max = p["k_max"].get<int>();
  return bp;
}

inline Outcome run_bootstrap(const json& cfg) {
  const BootstrapTrace t = bootstrap_sequence(bootstrap_params_from_config(cfg));
  Outcome out;
  out.report.kind = "bootstrap";
  out.report.config = cfg;
  const double gap = std::abs(t.beta.back() - t.params.alpha);
  out.report.scalar("p", t.params.p());
  out.report.scalar("beta_limit", t.beta_limit);
  out.report.scalar("C_limit", t.C_limit);
  out.report.scalar("limit_gap_beta", gap);
  out.report.scalar("limit_gap_C", std::abs(t.C.back() - t.C_limit));
  out.report.scalar("max_relative_gap", t.max_relative_gap);
  io::Table table{"trace", {"k", "beta_k", "C_k", "beta_closed", "C_closed"}, {}};
  for (std::size_t k = 0; k < t.beta.size(); ++k)
    table.add_row({static_cast<double>(k), t.beta[k], t.C[k], t.beta_closed[k], t.C_closed[k]});
  out.report.tables.push_back(std::move(table));
  out.summary = "|beta_k - alpha| at k = " + std::to_string(t.params.k_max) + ": " + fmt(gap) +
                ", C_k = " + fmt(t.C.back()) + " (limit " + fmt(t.C_limit) + ")";
  return out;
}

inline Outcome run_mt_ratio(const json& cfg) {
  const DiscreteMeasure measure = measure_from_config(cfg);
  const Density f = density_from_config(cfg, measure);
  const RealGrid w = weight_from_config(cfg);
  const double q = cfg["params"]["q"].get<double>();
  const MTProbe p = mt_ratio(measure, f, w, q, family_from_config(cfg));
  Outcome out;
  out.report.kind = "mt-ratio";
  out.report.config = cfg;
  out.report.scalar("q", q);
  out.report.scalar("lhs", p.lhs);
  out.report.scalar("lhs_half_window", p.lhs_half);
  out.report.scalar("sup_tube_mass", p.sup_mass);
  out.report.scalar("f_l2", p.f_norm);
  out.report.scalar("rhs", p.rhs);
  out.report.scalar("ratio", p.ratio);
  out.report.scalar("failure_witness", p.failure_witness ? 1.0 : 0.0);
  out.report.label("family", family_from_config(cfg).describe());
  grid_metadata(out.report, w);
  measure_metadata(out.report, measure);
  out.summary = "ratio = " + fmt(p.ratio) + " (lhs " + fmt(p.lhs) + ", rhs " + fmt(p.rhs) + ")";
  return out;
}

inline Outcome run_level_set(const json& cfg) {
  const DiscreteMeasure measure = measure_from_config(cfg);
  const Density f = density_from_config(cfg, measure);
  const RealGrid H = normalize_sup(weight_from_config(cfg));
  const double alpha = cfg["params"]["alpha"].get<double>();
  const bool tensor = cfg["level_set"]["flavor"].get<std::string>() == "tensor";
  const LevelSetProbe p =
      level_set_probe(measure, f, H, alpha,
                      tensor ? LevelSetFlavor::Tensor : LevelSetFlavor::Directional,
                      vec2_of(cfg["level_set"]["v"]), cfg["params"]["lambda_count"].get<std::size_t>());
  Outcome out;
  out.report.kind = "level-set";
  out.report.config = cfg;
  out.report.label("flavor", tensor ? "tensor" : "directional");
  out.report.scalar("functional", p.functional);
  out.report.scalar("f_l1", p.f_l1);
  out.report.scalar("f_l2", p.f_l2);
  out.report.scalar("max_constant", p.max_constant);
  io::Table t{"level_sets", {"lambda", "mu", "constant"}, {}};
  for (std::size_t i = 0; i < p.lambda.size(); ++i) t.add_row({p.lambda[i], p.mu[i], p.constant[i]});
  out.report.tables.push_back(std::move(t));
  grid_metadata(out.report, H);
  measure_metadata(out.report, measure);
  out.summary = "max c(lambda) = " + fmt(p.max_constant);
  return out;
}

inline Outcome run_local_growth(const json& cfg) {
  const DiscreteMeasure measure = measure_from_config(cfg);
  const Density f = density_from_config(cfg, measure);
  const RealGrid w = weight_from_config(cfg);
  const auto radii = cfg["growth"]["R"].get<std::vector<double>>();
  const LocalGrowth g = local_mt_growth(measure, f, w, radii, cfg["family"]["dtheta"].get<double>());
  Outcome out;
  out.report.kind = "local-growth";
  out.report.config = cfg;
  out.report.scalar("exponent", g.exponent);
  out.report.scalar("exponent_inf_v", g.exponent_inf);
  out.report.scalar("threshold", g.threshold);
  out.report.scalar("within_threshold", g.within_threshold ? 1.0 : 0.0);
  io::Table t{"growth", {"R", "lhs", "sup_all", "inf_v", "normalized", "normalized_inf_v"}, {}};
  for (const auto& r : g.rows)
    t.add_row({r.R, r.lhs, r.sup_all, r.inf_v, r.normalized, r.normalized_inf});
  out.report.tables.push_back(std::move(t));
  grid_metadata(out.report, w);
  measure_metadata(out.report, measure);
  out.summary = "growth exponent = " + fmt(g.exponent) +
                (g.within_threshold ? " (within " : " (exceeds ") + fmt(g.threshold) + ")";
  return out;
}

inline Outcome run_hypotheses(const json& cfg) {
  const CurveSpec spec = curve_from_config(cfg);
  require(spec.kind == CurveKind::ConvexGraph, ErrorKind::InvalidArgument,
          "hypotheses need an expflat or power curve");
  const double t_min = t_min_from_config(cfg, spec);
  const auto& p = cfg["params"];
  const HypothesisReport h = check_corollary_hypotheses(
      spec, p["grid_size"].get<std::size_t>(), t_min, p["tol"].get<double>());
  Outcome out;
  out.report.kind = "hypotheses";
  out.report.config = cfg;
  out.report.scalar("t_min", t_min);
  out.report.scalar("C", h.constant_c);
  out.report.scalar("violations", static_cast<double>(h.violations()));
  for (const ConditionCheck* c : {&h.gamma_convex, &h.gamma1_convex, &h.ratio_monotone}) {
    out.report.scalar(c->name + " worst margin", c->worst_margin);
    out.report.scalar(c->name + " violations", static_cast<double>(c->violations));
  }
  out.report.scalar("boundary ok", h.boundary_ok ? 1.0 : 0.0);
  io::Table t{"margins",
              {"t", "gamma_convex", "gamma1_convex", "ratio_monotone", "flatness"}, {}};
  for (std::size_t i = 0; i < h.t.size(); ++i)
    t.add_row({h.t[i], h.gamma_convex.margin[i], h.gamma1_convex.margin[i],
               h.ratio_monotone.margin[i], h.flatness[i]});
  out.report.tables.push_back(std::move(t));
  if (h.all_passed()) {
    out.summary = "all hypotheses satisfied, C = " + fmt(h.constant_c);
  } else {
    std::ostringstream s;
    s << "hypotheses violated (" << h.violations() << " violations";
    for (const ConditionCheck* c : {&h.gamma_convex, &h.gamma1_convex, &h.ratio_monotone})
      if (c->violations > 0) s << "; " << c->name << " first fails at t = " << fmt(c->first_violation);
    if (!h.boundary_ok) s << "; boundary limits";
    s << "), C = " << fmt(h.constant_c);
    out.summary = s.str();
  }
  return out;
}

inline Outcome run_search(const json& cfg) {
  const DiscreteMeasure measure = measure_from_config(cfg);
  const json& w = cfg["weight"];
  const json& p = cfg["params"];
  WeightSearchSpace space;
  space.a = w["a"].get<double>();
  space.b = w["b"].get<double>();
  space.lo = w["profile"]["lo"].get<double>();
  space.hi = w["profile"]["hi"].get<double>();
  const bool tensor_family = cfg["family"]["kind"].get<std::string>() == "tensor";
  const SearchResult r = extremizer_search(
      measure, p["q"].get<double>(), family_from_config(cfg), space, cfg["grid"]["L"].get<double>(),
      cfg["grid"]["n"].get<std::size_t>(), p["iterations"].get<std::size_t>(),
      cfg["seed"].get<std::uint64_t>(), p["restarts"].get<std::size_t>(), tensor_family);
  Outcome out;
  out.report.kind = "search";
  out.report.config = cfg;
  out.report.scalar("best_ratio", r.best.ratio);
  out.report.scalar("baseline_ratio", r.baseline.ratio);
  out.report.scalar("best_a", r.best_weight.a);
  out.report.scalar("best_b", r.best_weight.b);
  out.report.scalar("best_lo", r.best_weight.lo);
  out.report.scalar("best_hi", r.best_weight.hi);
  io::Table t{"ascent", {"step", "restart", "ratio"}, {}};
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    t.add_row({static_cast<double>(i), static_cast<double>(r.trace[i].restart), r.trace[i].ratio});
  out.report.tables.push_back(std::move(t));
  measure_metadata(out.report, measure);
  out.summary = "best ratio = " + fmt(r.best.ratio) + " (baseline " + fmt(r.baseline.ratio) + ")";
  return out;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"decay",     "functional",   "bootstrap",
                                              "mt-ratio",  "level-set",    "local-growth",
                                              "hypotheses", "search"};
  return names;
}

/// Runs one subcommand and records its wall-clock time.
inline Outcome run(const std::string& command, const json& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  if (command == "decay") out = run_decay(cfg);
  else if (command == "functional") out = run_functional(cfg);
  else if (command == "bootstrap") out = run_bootstrap(cfg);
  else if (command == "mt-ratio") out = run_mt_ratio(cfg);
  else if (command == "level-set") out = run_level_set(cfg);
  else if (command == "local-growth") out = run_local_growth(cfg);
  else if (command == "hypotheses") out = run_hypotheses(cfg);
  else if (command == "search") out = run_search(cfg);
  else throw Error(ErrorKind::InvalidArgument, "unknown command \"" + command + "\"");
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  out.report.timings.emplace_back("wall_seconds", elapsed.count());
  return out;
}

}  // namespace mtlab::commands
