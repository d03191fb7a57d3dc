#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "mtlab/core.hpp"

namespace mtlab::fft {

namespace detail {

/// FFTW planning is not thread safe; every plan create/destroy takes this lock.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    require(ptr != nullptr, ErrorKind::Io, "fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

struct Plan {
  explicit Plan(fftw_plan p) : plan(p) {
    require(plan != nullptr, ErrorKind::Io, "FFTW plan creation failed");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan); }
  fftw_plan plan;
};

}  // namespace detail

/// Full linear self-convolution of a real n x n array (row-major).
/// Output is (2n-1) x (2n-1): out[a][b] = sum_{i,j} in[i][j] in[a-i][b-j].
inline std::vector<double> self_convolution(const std::vector<double>& in, std::size_t n) {
  require(in.size() == n * n && n >= 1, ErrorKind::InvalidArgument,
          "self_convolution needs an n x n array");
  const std::size_t m = 2 * n - 1;
  const std::size_t p = 2 * n;  // padded size >= 2n - 1
  const std::size_t half = p / 2 + 1;
  detail::FftwBuffer real(sizeof(double) * p * p);
  detail::FftwBuffer spec(sizeof(fftw_complex) * p * half);
  auto* r = static_cast<double*>(real.ptr);
  auto* s = static_cast<fftw_complex*>(spec.ptr);
  std::unique_ptr<detail::Plan> forward, backward;
  {
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    const int pi_ = static_cast<int>(p);
    forward = std::make_unique<detail::Plan>(
        fftw_plan_dft_r2c_2d(pi_, pi_, r, s, FFTW_ESTIMATE));
    backward = std::make_unique<detail::Plan>(
        fftw_plan_dft_c2r_2d(pi_, pi_, s, r, FFTW_ESTIMATE));
  }
  std::fill(r, r + p * p, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i * p + j] = in[i * n + j];
  forward->execute();
  for (std::size_t k = 0; k < p * half; ++k) {
    const double re = s[k][0], im = s[k][1];
    s[k][0] = re * re - im * im;
    s[k][1] = 2.0 * re * im;
  }
  backward->execute();
  const double scale = 1.0 / static_cast<double>(p * p);
  std::vector<double> out(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out[a * m + b] = r[a * p + b] * scale;
  return out;
}

/// Full linear convolution of complex arrays a (na x na) and b (nb x nb).
/// Output is (na+nb-1) x (na+nb-1).
inline std::vector<std::complex<double>> convolve(const std::vector<std::complex<double>>& a,
                                                  std::size_t na,
                                                  const std::vector<std::complex<double>>& b,
                                                  std::size_t nb) {
  require(a.size() == na * na && b.size() == nb * nb && na >= 1 && nb >= 1,
          ErrorKind::InvalidArgument, "convolve needs square arrays");
  const std::size_t m = na + nb - 1;
  const std::size_t p = m;
  detail::FftwBuffer bufa(sizeof(fftw_complex) * p * p);
  detail::FftwBuffer bufb(sizeof(fftw_complex) * p * p);
  auto* fa = static_cast<fftw_complex*>(bufa.ptr);
  auto* fb = static_cast<fftw_complex*>(bufb.ptr);
  std::unique_ptr<detail::Plan> plan_a, plan_b, inverse;
  {
    std::lock_guard<std::mutex> lock(detail::planner_mutex());
    const int pi_ = static_cast<int>(p);
    plan_a = std::make_unique<detail::Plan>(
        fftw_plan_dft_2d(pi_, pi_, fa, fa, FFTW_FORWARD, FFTW_ESTIMATE));
    plan_b = std::make_unique<detail::Plan>(
        fftw_plan_dft_2d(pi_, pi_, fb, fb, FFTW_FORWARD, FFTW_ESTIMATE));
    inverse = std::make_unique<detail::Plan>(
        fftw_plan_dft_2d(pi_, pi_, fa, fa, FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  std::fill(reinterpret_cast<double*>(fa), reinterpret_cast<double*>(fa) + 2 * p * p, 0.0);
  std::fill(reinterpret_cast<double*>(fb), reinterpret_cast<double*>(fb) + 2 * p * p, 0.0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      fa[i * p + j][0] = a[i * na + j].real();
      fa[i * p + j][1] = a[i * na + j].imag();
    }
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      fb[i * p + j][0] = b[i * nb + j].real();
      fb[i * p + j][1] = b[i * nb + j].imag();
    }
  plan_a->execute();
  plan_b->execute();
  for (std::size_t k = 0; k < p * p; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  inverse->execute();
  const double scale = 1.0 / static_cast<double>(p * p);
  std::vector<std::complex<double>> out(m * m);
  for (std::size_t k = 0; k < m * m; ++k) out[k] = {fa[k][0] * scale, fa[k][1] * scale};
  return out;
}

}  // namespace mtlab::fft
