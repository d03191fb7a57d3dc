#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mtlab {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Error categories surfaced by the library and mapped to CLI exit codes.
enum class ErrorKind {
  InvalidArgument,
  HypothesisViolation,
  Singularity,
  InsufficientData,
  DegenerateWeight,
  RangeViolation,
  UnknownKey,
  ParseError,
  MissingFile,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateWeight: return "degenerate-weight";
    case ErrorKind::RangeViolation: return "range-violation";
    case ErrorKind::UnknownKey: return "unknown-key";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::MissingFile: return "missing-file";
    case ErrorKind::Io: return "io-error";
  }
  return "error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Vec2 a) { return std::hypot(a.x1, a.x2); }
/// Counter-clockwise rotation by a right angle.
inline Vec2 perp(Vec2 a) { return {-a.x2, a.x1}; }

inline Vec2 normalized(Vec2 a) {
  const double r = norm(a);
  require(r > 0.0, ErrorKind::InvalidArgument, "cannot normalize the zero vector");
  return {a.x1 / r, a.x2 / r};
}

inline Vec2 unit_at_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// e^{-2 pi i phase}
inline complex unimodular(double phase) {
  const double a = -two_pi * phase;
  return {std::cos(a), std::sin(a)};
}

// ---------------------------------------------------------------------------
// Data-parallel loops. Every index writes only its own output slot and all
// reductions happen afterwards in index order, so parallel and sequential runs
// produce bit-identical results.

namespace detail {
inline std::atomic<bool>& sequential_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}
}  // namespace detail

inline void set_sequential(bool on) { detail::sequential_flag() = on; }
inline bool sequential() { return detail::sequential_flag(); }

/// Worker count: MTLAB_THREADS caps hardware concurrency; 1 in sequential mode.
inline unsigned worker_count() {
  if (sequential()) return 1;
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MTLAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  constexpr std::size_t chunk = 16;
  auto body = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + chunk);
      for (std::size_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi >= lo && count >= 1, ErrorKind::InvalidArgument,
          "log_spaced needs 0 < lo <= hi and count >= 1");
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::InsufficientData,
          "line fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace mtlab
