#include "catch_amalgamated.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "mtlab/io.hpp"

using namespace mtlab;
using namespace mtlab::io;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mtlab_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an mtlab::Error");
  return ErrorKind::InvalidArgument;
}

std::string message_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("a minimal config is filled with defaults") {
  const auto c = config_from_json(json::parse(R"({"grid": {"n": 64}})"));
  CHECK(c["grid"]["n"] == 64);
  CHECK(c["grid"]["L"] == 16.0);
  CHECK(c["params"]["alpha"] == 1.0);
  CHECK(c["measure"]["t_min"].is_null());
  const auto empty = config_from_json(json::object());
  CHECK(empty == config_defaults());
}

TEST_CASE("range violations name the key") {
  const auto msg = message_of([] { config_from_json(json::parse(R"({"params": {"alpha": 3}})")); });
  CHECK(msg.find("alpha") != std::string::npos);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"params": {"alpha": 3}})")); }) ==
        ErrorKind::RangeViolation);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"params": {"q": 0}})")); }) ==
        ErrorKind::RangeViolation);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"grid": {"n": 100}})")); }) ==
        ErrorKind::RangeViolation);
  CHECK(kind_of([] { config_from_json(json::parse(R"({"measure": {"kind": "ellipse"}})")); }) ==
        ErrorKind::RangeViolation);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(kind_of([] { config_from_json(json::parse(R"({"foo": 1})")); }) == ErrorKind::UnknownKey);
  const auto msg = message_of([] { config_from_json(json::parse(R"({"grid": {"foo": 1}})")); });
  CHECK(msg.find("grid.foo") != std::string::npos);
}

TEST_CASE("type mismatches are rejected") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"grid": {"n": "big"}})")), Error);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"grid": 3})")), Error);
  CHECK(kind_of([] { config_from_json(json::array()); }) == ErrorKind::ParseError);
}

TEST_CASE("loading from files") {
  const auto dir = scratch_dir("load");
  CHECK(kind_of([&] { load_config((dir / "absent.json").string()); }) == ErrorKind::MissingFile);
  write_text(dir / "bad.json", "{ \"grid\": ");
  CHECK(kind_of([&] { load_config((dir / "bad.json").string()); }) == ErrorKind::ParseError);
  write_text(dir / "ok.json", R"({"measure": {"kind": "flat", "nodes": 256}})");
  const auto c = load_config((dir / "ok.json").string());
  CHECK(c["measure"]["kind"] == "flat");
}

TEST_CASE("overrides use dotted keys") {
  auto c = config_from_json(json::object());
  apply_override(c, "grid.n=512");
  CHECK(c["grid"]["n"] == 512);
  apply_override(c, "measure.kind=flat");
  CHECK(c["measure"]["kind"] == "flat");
  apply_override(c, "family.v=[0,1]");
  CHECK(c["family"]["v"][1] == 1);
  apply_override(c, "measure.t_min=0.001");
  CHECK(c["measure"]["t_min"] == 0.001);
  CHECK(kind_of([&] { apply_override(c, "grid.nn=4"); }) == ErrorKind::UnknownKey);
  CHECK(kind_of([&] { apply_override(c, "params.alpha=7"); }) == ErrorKind::RangeViolation);
  CHECK(kind_of([&] { apply_override(c, "noequals"); }) == ErrorKind::ParseError);
}

TEST_CASE("doubles serialize to shortest round-trip text") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e300) == "1e+300");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(NAN) == "nan");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::ldexp(u(rng), static_cast<int>(u(rng)));
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("report JSON round trip is bit exact") {
  Report r;
  r.kind = "decay";
  r.config = config_from_json(json::object());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) r.scalar("s" + std::to_string(i), u(rng) * std::pow(10.0, i - 25));
  r.scalar("bad", INFINITY);
  r.label("regime", "directional");
  Table t{"fit", {"x", "y"}, {}};
  t.add_row({1.0 / 3.0, 2.0 / 7.0});
  r.tables.push_back(t);
  r.metadata["h"] = 0.125;

  const auto text = report_to_json(r).dump(2);
  const auto back = report_from_json(json::parse(text));
  REQUIRE(back.scalars.size() == r.scalars.size());
  for (std::size_t i = 0; i + 1 < r.scalars.size(); ++i) CHECK(back.scalars[i] == r.scalars[i]);
  CHECK(std::isnan(back.get("bad")));
  CHECK(back.tables[0].rows == r.tables[0].rows);
  CHECK(back.labels == r.labels);
  CHECK(back.config.dump() == r.config.dump());
  CHECK(report_to_json(back).dump(2) == report_to_json(report_from_json(json::parse(text))).dump(2));
  CHECK_THROWS_AS(r.get("missing"), Error);
}

TEST_CASE("CSV quoting and line endings") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  Table t{"t", {"R", "mass, total"}, {}};
  t.add_row({1.0, 0.5});
  t.add_row({2.0, 0.25});
  CHECK(table_to_csv(t) == "R,\"mass, total\"\r\n1,0.5\r\n2,0.25\r\n");
  CHECK_THROWS_AS(t.add_row({1.0}), Error);
}

TEST_CASE("writing reports") {
  const auto dir = scratch_dir("write");
  Report r;
  r.kind = "bootstrap";
  const auto no_tables = write_report(r, (dir / "empty").string());
  CHECK(no_tables.size() == 1);
  CHECK(json::parse(slurp(dir / "empty.json"))["tables"] == json::array());

  Table t{"trace k", {"k", "beta"}, {}};
  t.add_row({0.0, 1.0});
  t.add_row({1.0, 0.75});
  r.tables.push_back(t);
  r.timings.emplace_back("wall_seconds", 0.01);
  const auto files = write_report(r, (dir / "run").string());
  CHECK(files.size() == 3);
  CHECK(fs::exists(dir / "run.trace_k.csv"));
  CHECK(fs::exists(dir / "run.timings.json"));
  CHECK(slurp(dir / "run.json").find("wall_seconds") == std::string::npos);
  const auto csv = slurp(dir / "run.trace_k.csv");
  CHECK(csv.substr(0, csv.find("\r\n")) == "k,beta");

  const auto plots = emit_plot_data(r, (dir / "run").string());
  REQUIRE(plots.size() == 1);
  const auto svg = slurp(plots[0]);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find(">k<") != std::string::npos);
  CHECK(svg.find("beta") != std::string::npos);

  // Same report, same bytes.
  write_report(r, (dir / "again").string());
  CHECK(slurp(dir / "run.json") == slurp(dir / "again.json"));
  CHECK(slurp(dir / "run.trace_k.csv") == slurp(dir / "again.trace_k.csv"));
}

TEST_CASE("unwritable destinations raise io errors") {
  const auto dir = scratch_dir("ro");
  write_text(dir / "file", "x");
  // A regular file cannot act as a directory.
  CHECK(kind_of([&] { write_text(dir / "file" / "sub.json", "{}"); }) == ErrorKind::Io);
}

TEST_CASE("svg axes switch to log scale for wide positive ranges") {
  Table wide{"wide", {"R", "mass"}, {}};
  for (double R : {1.0, 10.0, 100.0, 1000.0}) wide.add_row({R, R * R});
  CHECK(table_to_svg(wide).find("log10") != std::string::npos);
  Table narrow{"narrow", {"x", "y"}, {}};
  narrow.add_row({0.0, -1.0});
  narrow.add_row({1.0, 2.0});
  CHECK(table_to_svg(narrow).find("log10") == std::string::npos);
  CHECK(svg_escape("a<b&\"c\"") == "a&lt;b&amp;&quot;c&quot;");
}

TEST_CASE("batched overrides are validated together") {
  auto c = config_from_json(json::object());
  const double hi = c["decay"]["hi"].get<double>();
  const std::string lo = "decay.lo=" + format_double(2.0 * hi);
  const std::string up = "decay.hi=" + format_double(4.0 * hi);
  CHECK(kind_of([&] { auto d = c; apply_override(d, lo); }) == ErrorKind::RangeViolation);
  apply_overrides(c, {lo, up});
  CHECK(c["decay"]["lo"] == 2.0 * hi);
  CHECK(kind_of([&] { apply_overrides(c, {"decay.lo=0"}); }) == ErrorKind::RangeViolation);
}
