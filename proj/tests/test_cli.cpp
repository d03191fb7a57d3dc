#include "catch_amalgamated.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "mtlab/core.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

const std::string& cli() {
  static const std::string path = env_or("MTLAB_CLI", "./mtlab");
  return path;
}

std::string config(const std::string& name) {
  return env_or("MTLAB_SOURCE_DIR", ".") + "/configs/" + name;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mtlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args) {
  Run r;
  const std::string cmd = "\"" + cli() + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int code_of(mtlab::ErrorKind k) { return 2 + static_cast<int>(k); }

}  // namespace

TEST_CASE("bootstrap prints the limit gap and writes the trace") {
  const auto dir = scratch("bootstrap");
  const auto r = run("bootstrap --config " + config("bootstrap.json") + " --out " + dir.string());
  INFO(r.out);
  CHECK(r.status == 0);
  CHECK(r.out.find("|beta_k - alpha| at k = 60") != std::string::npos);
  CHECK(fs::exists(dir / "bootstrap.bootstrap.json"));
  bool csv = false;
  for (const auto& e : fs::directory_iterator(dir)) csv |= e.path().extension() == ".csv";
  CHECK(csv);
}

TEST_CASE("decay on the circle reports an exponent near one half") {
  const auto dir = scratch("decay");
  const auto r = run("decay --config " + config("circle.json") + " --out " + dir.string() + " -v");
  INFO(r.out);
  REQUIRE(r.status == 0);
  const auto pos = r.out.find("delta_hat = ");
  REQUIRE(pos != std::string::npos);
  const double d = std::stod(r.out.substr(pos + 12));
  CHECK(d > 0.45);
  CHECK(d < 0.55);
}

TEST_CASE("hypotheses for the exp-flat curve are satisfied") {
  const auto dir = scratch("hyp");
  const auto r = run("hypotheses --config " + config("expflat_m1.json") + " --out " + dir.string());
  INFO(r.out);
  CHECK(r.status == 0);
  CHECK(r.out.find("all hypotheses satisfied, C = ") != std::string::npos);
  const auto bad = run("hypotheses --config " + config("expflat_m1.json") +
                       " --set measure.c=0.3 --out " + dir.string());
  CHECK(bad.status == 0);
  CHECK(bad.out.find("hypotheses violated") != std::string::npos);
}

TEST_CASE("every shipped config runs") {
  const auto dir = scratch("all");
  const std::pair<const char*, const char*> cases[] = {
      {"decay", "flat.json"},           {"functional", "tensor_box.json"},
      {"mt-ratio", "mt_flat.json"},     {"level-set", "level_set_flat.json"},
      {"local-growth", "local_growth.json"}, {"search", "search_circle.json"},
      {"hypotheses", "expflat_m2.json"}};
  for (const auto& [cmd, cfg] : cases) {
    const auto r = run(std::string(cmd) + " --config " + config(cfg) + " --out " + dir.string());
    INFO(cmd << " " << cfg << "\n" << r.out);
    CHECK(r.status == 0);
    CHECK(r.out.rfind(std::string(cmd) + ": ", 0) == 0);
  }
}

TEST_CASE("sequential runs are byte identical") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const std::string args = "search --config " + config("search_circle.json") + " --seq --seed 7";
  REQUIRE(run(args + " --out " + a.string()).status == 0);
  REQUIRE(run(args + " --out " + b.string()).status == 0);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename().string();
    if (name.find("timings") != std::string::npos) continue;
    CHECK(slurp(e.path()) == slurp(b / name));
    ++compared;
  }
  CHECK(compared >= 2);
}

TEST_CASE("typed errors map to exit codes") {
  const auto dir = scratch("errors");
  const auto missing = run("decay --config " + (dir / "nope.json").string());
  CHECK(missing.status == code_of(mtlab::ErrorKind::MissingFile));
  CHECK(missing.out.find("missing-file") != std::string::npos);

  const auto range = run("decay --config " + config("flat.json") + " --set params.alpha=3");
  CHECK(range.status == code_of(mtlab::ErrorKind::RangeViolation));
  CHECK(range.out.find("alpha") != std::string::npos);

  const auto unknown = run("decay --config " + config("flat.json") + " --set foo=1");
  CHECK(unknown.status == code_of(mtlab::ErrorKind::UnknownKey));

  {
    std::ofstream(dir / "broken.json") << "{ not json";
  }
  const auto parse = run("decay --config " + (dir / "broken.json").string());
  CHECK(parse.status == code_of(mtlab::ErrorKind::ParseError));

  // Diagnostics are a single line.
  CHECK(std::count(range.out.begin(), range.out.end(), '\n') == 1);
}

TEST_CASE("usage errors come from the argument parser") {
  CHECK(run("").status != 0);
  CHECK(run("decay").status != 0);
  CHECK(run("frobnicate --config x.json").status != 0);
  CHECK(run("--help").status == 0);
}
