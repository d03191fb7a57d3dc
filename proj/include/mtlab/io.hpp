#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mtlab/core.hpp"

namespace mtlab::io {

using json = nlohmann::ordered_json;

/// Every documented configuration key with its default. A null default accepts
/// a number or null ("choose automatically").
inline const json& config_defaults() {
  static const json defaults = json::parse(R"({
    "experiment": "",
    "seed": 1,
    "measure": {"kind": "circle", "nodes": 4096, "m": 1.0, "p": 2.0, "c": 0.3, "t_min": null},
    "f": {"kind": "constant", "x0": [0.0, 0.0]},
    "weight": {
      "kind": "window",
      "profile": {"kind": "indicator", "lo": 0.0, "hi": 1.0, "center": 0.5, "width": 0.5,
                  "period": 2.0, "count": 1},
      "a": 1.0, "b": 1.0, "radius": 1.0, "offset": 0.0
    },
    "grid": {"L": 16.0, "n": 128},
    "family": {"kind": "perp", "m": 1.0, "v": [1.0, 0.0], "dtheta": 0.017453292519943295},
    "params": {"alpha": 1.0, "beta": 0.5, "beta0": 1.0, "C0": 4.0, "M": 1.0, "N": 1.0,
               "k_max": 60, "q": 2.5, "lambda_count": 40, "iterations": 2, "restarts": 2,
               "grid_size": 1000, "tol": 1e-9},
    "decay": {"regime": "directional", "v": [1.0, 0.0], "lo": 1.0, "hi": 1000.0, "samples": 200},
    "functional": {"kind": "ball", "v": [1.0, 0.0]},
    "level_set": {"flavor": "directional", "v": [1.0, 0.0]},
    "growth": {"R": [2.0, 4.0, 8.0, 16.0]},
    "output": {"dir": "out", "prefix": ""}
  })");
  return defaults;
}

namespace detail {

inline bool same_kind(const json& def, const json& val) {
  if (def.is_null()) return val.is_null() || val.is_number();
  if (def.is_number()) return val.is_number();
  if (def.is_string()) return val.is_string();
  if (def.is_boolean()) return val.is_boolean();
  if (def.is_array()) return val.is_array();
  if (def.is_object()) return val.is_object();
  return false;
}

inline void merge_strict(json& target, const json& source, const std::string& path) {
  for (auto it = source.begin(); it != source.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!target.contains(it.key())) throw Error(ErrorKind::UnknownKey, "unknown key \"" + key + "\"");
    json& slot = target[it.key()];
    if (!same_kind(slot, it.value()))
      throw Error(ErrorKind::ParseError, "key \"" + key + "\" has the wrong type");
    if (slot.is_object())
      merge_strict(slot, it.value(), key);
    else
      slot = it.value();
  }
}

inline void range(bool ok, const std::string& key, const std::string& rule) {
  if (!ok) throw Error(ErrorKind::RangeViolation, "\"" + key + "\" must satisfy " + rule);
}

inline bool one_of(const std::string& s, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (s == o) return true;
  return false;
}

inline void require_vec2(const json& v, const std::string& key) {
  range(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(), key,
        "a two-element numeric array");
}

inline bool power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace detail

/// Range checks on every documented field.
inline void validate_config(const json& c) {
  using detail::one_of;
  using detail::range;
  const json& m = c["measure"];
  range(one_of(m["kind"].get<std::string>(), {"circle", "flat", "expflat", "power", "point"}),
        "measure.kind", "one of circle, flat, expflat, power, point");
  range(m["nodes"].is_number_integer() && m["nodes"].get<long>() >= 2, "measure.nodes",
        "an integer >= 2");
  range(m["m"].get<double>() > 0.0, "measure.m", "m > 0");
  range(m["p"].get<double>() >= 2.0, "measure.p", "p >= 2");
  range(m["c"].get<double>() > 0.0, "measure.c", "c > 0");
  if (!m["t_min"].is_null())
    range(m["t_min"].get<double>() >= 0.0 && m["t_min"].get<double>() < m["c"].get<double>(),
          "measure.t_min", "0 <= t_min < c");

  range(one_of(c["f"]["kind"].get<std::string>(), {"constant", "random", "focused"}), "f.kind",
        "one of constant, random, focused");
  detail::require_vec2(c["f"]["x0"], "f.x0");

  const json& w = c["weight"];
  range(one_of(w["kind"].get<std::string>(), {"window", "tensor", "tube", "ball", "zero"}),
        "weight.kind", "one of window, tensor, tube, ball, zero");
  range(one_of(w["profile"]["kind"].get<std::string>(), {"indicator", "bump", "steps"}),
        "weight.profile.kind", "one of indicator, bump, steps");
  range(w["a"].get<double>() > 0.0, "weight.a", "a > 0");
  range(w["b"].get<double>() > 0.0, "weight.b", "b > 0");
  range(w["radius"].get<double>() > 0.0, "weight.radius", "radius > 0");
  range(w["profile"]["width"].get<double>() > 0.0, "weight.profile.width", "width > 0");
  range(w["profile"]["hi"].get<double>() > w["profile"]["lo"].get<double>(), "weight.profile.hi",
        "hi > lo");
  range(w["profile"]["count"].is_number_integer() && w["profile"]["count"].get<long>() >= 1,
        "weight.profile.count", "an integer >= 1");

  const json& g = c["grid"];
  range(g["L"].get<double>() > 0.0, "grid.L", "L > 0");
  range(g["n"].is_number_integer() && detail::power_of_two(g["n"].get<long>()) &&
            g["n"].get<long>() >= 2,
        "grid.n", "a power of two >= 2");

  const json& fam = c["family"];
  range(one_of(fam["kind"].get<std::string>(), {"slope", "perp", "all", "tensor"}),
        "family.kind", "one of slope, perp, all, tensor");
  range(fam["m"].get<double>() >= 0.0, "family.m", "m >= 0");
  detail::require_vec2(fam["v"], "family.v");
  range(fam["dtheta"].get<double>() > 0.0 && fam["dtheta"].get<double>() <= pi, "family.dtheta",
        "0 < dtheta <= pi");

  const json& p = c["params"];
  const double alpha = p["alpha"].get<double>(), beta = p["beta"].get<double>();
  range(alpha > 0.0 && alpha <= 2.0, "alpha", "0 < alpha <= 2");
  range(beta > 0.0 && beta <= 2.0, "beta", "0 < beta <= 2");
  range(p["beta0"].get<double>() > 0.0, "beta0", "beta0 > 0");
  range(p["C0"].get<double>() > 0.0, "C0", "C0 > 0");
  range(p["M"].get<double>() > 0.0, "M", "M > 0");
  range(p["N"].get<double>() >= 1.0, "N", "N >= 1");
  range(p["k_max"].is_number_integer() && p["k_max"].get<long>() >= 0, "k_max",
        "an integer >= 0");
  range(p["q"].get<double>() > 0.0, "q", "q > 0");
  range(p["lambda_count"].is_number_integer() && p["lambda_count"].get<long>() >= 2,
        "lambda_count", "an integer >= 2");
  range(p["iterations"].is_number_integer() && p["iterations"].get<long>() >= 1, "iterations",
        "an integer >= 1");
  range(p["restarts"].is_number_integer() && p["restarts"].get<long>() >= 1, "restarts",
        "an integer >= 1");
  range(p["grid_size"].is_number_integer() && p["grid_size"].get<long>() >= 2, "grid_size",
        "an integer >= 2");
  range(p["tol"].get<double>() >= 0.0, "tol", "tol >= 0");

  const json& d = c["decay"];
  range(one_of(d["regime"].get<std::string>(),
               {"directional", "tensor-axis1", "tensor-axis2", "tensor-product"}),
        "decay.regime", "one of directional, tensor-axis1, tensor-axis2, tensor-product");
  detail::require_vec2(d["v"], "decay.v");
  range(d["lo"].get<double>() > 0.0 && d["hi"].get<double>() > d["lo"].get<double>(),
        "decay.hi", "0 < lo < hi");
  range(d["samples"].is_number_integer() && d["samples"].get<long>() >= 16, "decay.samples",
        "an integer >= 16");

  range(one_of(c["functional"]["kind"].get<std::string>(), {"ball", "box", "tube"}),
        "functional.kind", "one of ball, box, tube");
  detail::require_vec2(c["functional"]["v"], "functional.v");
  range(one_of(c["level_set"]["flavor"].get<std::string>(), {"tensor", "directional"}),
        "level_set.flavor", "one of tensor, directional");
  detail::require_vec2(c["level_set"]["v"], "level_set.v");

  const json& R = c["growth"]["R"];
  range(!R.empty(), "growth.R", "a nonempty list");
  for (std::size_t i = 0; i < R.size(); ++i) {
    range(R[i].is_number() && R[i].get<double>() >= 1.0, "growth.R", "entries >= 1");
    range(i == 0 || R[i].get<double>() > R[i - 1].get<double>(), "growth.R",
          "an increasing list");
  }
  range(c["seed"].is_number_integer() && c["seed"].get<long long>() >= 0, "seed",
        "a nonnegative integer");
}

/// Defaults merged with `user`, validated.
inline json config_from_json(const json& user) {
  if (!user.is_object()) throw Error(ErrorKind::ParseError, "config root must be an object");
  json c = config_defaults();
  detail::merge_strict(c, user, "");
  validate_config(c);
  return c;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, origin + ": " + e.what());
  }
}

inline json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open config \"" + path + "\"");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(parse_json_text(ss.str(), path));
}

/// Applies "dotted.key=value"; value is parsed as JSON, falling back to a string.
namespace detail {

inline void merge_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::ParseError, "override \"" + assignment + "\" is not KEY=VALUE");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  std::size_t pos;
  while ((pos = rest.find('.')) != std::string::npos) {
    parts.push_back(rest.substr(0, pos));
    rest = rest.substr(pos + 1);
  }
  parts.push_back(rest);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  merge_strict(config, patch, "");
}

}  // namespace detail

inline void apply_override(json& config, const std::string& assignment) {
  detail::merge_override(config, assignment);
  validate_config(config);
}

// Applies every assignment before validating, so related keys can change together.
inline void apply_overrides(json& config, const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) detail::merge_override(config, a);
  validate_config(config);
}

// ---------------------------------------------------------------------------
// Reports.

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row) {
    require(row.size() == columns.size(), ErrorKind::InvalidArgument,
            "table \"" + name + "\": row width does not match the column count");
    rows.push_back(std::move(row));
  }
};

struct Report {
  std::string kind;
  json config = json::object();
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::string>> labels;
  std::vector<Table> tables;
  json metadata = json::object();
  std::vector<std::pair<std::string, double>> timings;

  void scalar(const std::string& name, double value) { scalars.emplace_back(name, value); }
  void label(const std::string& name, const std::string& value) {
    labels.emplace_back(name, value);
  }
  double get(const std::string& name) const {
    for (const auto& [k, v] : scalars)
      if (k == name) return v;
    throw Error(ErrorKind::UnknownKey, "report has no scalar \"" + name + "\"");
  }
};

/// Shortest round-trip decimal for a binary64 value.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json report_to_json(const Report& r) {
  json out = json::object();
  out["kind"] = r.kind;
  out["config"] = r.config;
  json scalars = json::object();
  for (const auto& [k, v] : r.scalars) scalars[k] = number_or_null(v);
  out["scalars"] = scalars;
  json labels = json::object();
  for (const auto& [k, v] : r.labels) labels[k] = v;
  out["labels"] = labels;
  json tables = json::array();
  for (const auto& t : r.tables) {
    json rows = json::array();
    for (const auto& row : t.rows) {
      require(row.size() == t.columns.size(), ErrorKind::InvalidArgument,
              "table \"" + t.name + "\" has a ragged row");
      json jr = json::array();
      for (double v : row) jr.push_back(number_or_null(v));
      rows.push_back(jr);
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  out["tables"] = tables;
  out["metadata"] = r.metadata;
  return out;
}

inline Report report_from_json(const json& j) {
  Report r;
  r.kind = j.at("kind").get<std::string>();
  r.config = j.at("config");
  for (auto it = j.at("scalars").begin(); it != j.at("scalars").end(); ++it)
    r.scalars.emplace_back(it.key(), it.value().is_null() ? NAN : it.value().get<double>());
  for (auto it = j.at("labels").begin(); it != j.at("labels").end(); ++it)
    r.labels.emplace_back(it.key(), it.value().get<std::string>());
  for (const auto& jt : j.at("tables")) {
    Table t;
    t.name = jt.at("name").get<std::string>();
    t.columns = jt.at("columns").get<std::vector<std::string>>();
    for (const auto& row : jt.at("rows")) {
      std::vector<double> vals;
      for (const auto& v : row) vals.push_back(v.is_null() ? NAN : v.get<double>());
      t.rows.push_back(std::move(vals));
    }
    r.tables.push_back(std::move(t));
  }
  r.metadata = j.at("metadata");
  return r;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string table_to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out += (c ? "," : "") + csv_field(t.columns[c]);
  out += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
    out += "\r\n";
  }
  return out;
}

/// File-system safe version of a table name.
inline std::string slug(const std::string& s) {
  std::string out;
  for (char ch : s) out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
  return out.empty() ? "table" : out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write \"" + path.string() + "\"");
  out << text;
  out.close();
  if (!out) throw Error(ErrorKind::Io, "write failed for \"" + path.string() + "\"");
}

/// Writes <prefix>.json, one <prefix>.<table>.csv per table, and the
/// wall-clock timings separately in <prefix>.timings.json so that the report
/// files themselves are deterministic. Returns the paths written.
inline std::vector<std::string> write_report(const Report& r, const std::string& prefix) {
  std::vector<std::string> written;
  const std::string main = prefix + ".json";
  write_text(main, report_to_json(r).dump(2) + "\n");
  written.push_back(main);
  for (const auto& t : r.tables) {
    const std::string path = prefix + "." + slug(t.name) + ".csv";
    write_text(path, table_to_csv(t));
    written.push_back(path);
  }
  if (!r.timings.empty()) {
    json tj = json::object();
    for (const auto& [k, v] : r.timings) tj[k] = number_or_null(v);
    const std::string path = prefix + ".timings.json";
    write_text(path, tj.dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

inline std::string svg_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

/// Line-and-marker chart of columns 1.. against column 0. Axes switch to
/// log10 when every value is positive and spans more than two decades.
inline std::string table_to_svg(const Table& t) {
  require(t.columns.size() >= 2, ErrorKind::InvalidArgument, "plot needs at least two columns");
  const double W = 640, Hh = 420, ml = 70, mr = 20, mt = 30, mb = 50;
  auto finite_column = [&](std::size_t c) {
    std::vector<double> v;
    for (const auto& row : t.rows)
      if (std::isfinite(row[c])) v.push_back(row[c]);
    return v;
  };
  auto use_log = [](const std::vector<double>& v) {
    if (v.empty()) return false;
    double lo = v[0], hi = v[0];
    for (double x : v) {
      if (x <= 0.0) return false;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    return hi / lo > 100.0;
  };
  std::vector<double> xs = finite_column(0), ys;
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    auto col = finite_column(c);
    ys.insert(ys.end(), col.begin(), col.end());
  }
  const bool logx = use_log(xs), logy = use_log(ys);
  auto tx = [&](double v) { return logx ? std::log10(v) : v; };
  auto ty = [&](double v) { return logy ? std::log10(v) : v; };
  auto bounds = [](const std::vector<double>& v, auto tf) {
    double lo = INFINITY, hi = -INFINITY;
    for (double x : v) {
      lo = std::min(lo, tf(x));
      hi = std::max(hi, tf(x));
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi == lo) lo -= 0.5, hi += 0.5;
    return std::pair{lo, hi};
  };
  const auto [x0, x1] = bounds(xs, tx);
  const auto [y0, y1] = bounds(ys, ty);
  auto px = [&](double v) { return ml + (tx(v) - x0) / (x1 - x0) * (W - ml - mr); };
  auto py = [&](double v) { return Hh - mb - (ty(v) - y0) / (y1 - y0) * (Hh - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                 "#8c564b"};
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hh
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\">" << svg_escape(t.name)
    << "</text>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << Hh - mb << "\" x2=\"" << W - mr << "\" y2=\""
    << Hh - mb << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << Hh - mb
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << Hh - 12 << "\" text-anchor=\"middle\">"
    << svg_escape(t.columns[0]) << (logx ? " (log10)" : "") << "</text>\n";
  s << "<text x=\"16\" y=\"" << (mt + Hh - mb) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (mt + Hh - mb) / 2 << ")\">" << (logy ? "log10 " : "") << "value</text>\n";
  s << "<text x=\"" << ml << "\" y=\"" << Hh - mb + 16 << "\">" << format_double(x0) << "</text>\n";
  s << "<text x=\"" << W - mr << "\" y=\"" << Hh - mb + 16 << "\" text-anchor=\"end\">"
    << format_double(x1) << "</text>\n";
  s << "<text x=\"" << ml - 4 << "\" y=\"" << Hh - mb << "\" text-anchor=\"end\">"
    << format_double(y0) << "</text>\n";
  s << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 4 << "\" text-anchor=\"end\">"
    << format_double(y1) << "</text>\n";
  for (std::size_t c = 1; c < t.columns.size(); ++c) {
    const char* color = colors[(c - 1) % 6];
    std::string path;
    for (const auto& row : t.rows) {
      const double x = row[0], y = row[c];
      if (!std::isfinite(x) || !std::isfinite(y) || (logx && x <= 0) || (logy && y <= 0)) continue;
      path += (path.empty() ? "M" : " L") + format_double(px(x)) + " " + format_double(py(y));
      s << "<circle cx=\"" << format_double(px(x)) << "\" cy=\"" << format_double(py(y))
        << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    }
    if (!path.empty())
      s << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << color << "\"/>\n";
    s << "<text x=\"" << W - mr - 4 << "\" y=\"" << mt + 14 * c << "\" text-anchor=\"end\" fill=\""
      << color << "\">" << svg_escape(t.columns[c]) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

/// One SVG chart per table with at least two columns and one row.
inline std::vector<std::string> emit_plot_data(const Report& r, const std::string& prefix) {
  std::vector<std::string> written;
  for (const auto& t : r.tables) {
    if (t.columns.size() < 2 || t.rows.empty()) continue;
    const std::string path = prefix + "." + slug(t.name) + ".svg";
    write_text(path, table_to_svg(t));
    written.push_back(path);
  }
  return written;
}

}  // namespace mtlab::io
