#include "catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "mtlab/fourier.hpp"
#include "mtlab/measures.hpp"
#include "oracles.hpp"

using namespace mtlab;
using Catch::Approx;

namespace {

double slope_of_log2_max(const std::vector<int>& levels, const std::vector<double>& maxima) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    x.push_back(levels[i]);
    y.push_back(std::log2(maxima[i]));
  }
  return fit_line(x, y).slope;
}

}  // namespace

TEST_CASE("sigma_hat of the circle is 2 pi J0(2 pi r)") {
  const auto m = make_circle_measure(2048);
  CHECK(std::abs(sigma_hat(m, {0.0, 0.0}) - complex(two_pi)) <= 1e-10 * two_pi);
  for (double r : {0.5, 1.0, 5.0, 20.0}) {
    const complex s = sigma_hat(m, {r * 0.6, r * 0.8});
    CHECK(std::abs(s - complex(two_pi * oracle::bessel_j0(two_pi * r))) <= 1e-9);
  }
}

TEST_CASE("sigma_hat of the flat segment matches its closed form") {
  const auto m = make_flat_segment_measure(128);
  for (double x1 : {0.3, 1.0, 2.5, 7.0, -3.3})
    for (double x2 : {0.0, 4.0, -11.0})
      CHECK(std::abs(sigma_hat(m, {x1, x2}) - oracle::flat_segment_hat(x1)) <= 1e-12);
}

TEST_CASE("sigma_hat at many points agrees with single evaluation") {
  const auto m = make_circle_measure(64);
  const std::vector<Vec2> pts{{0.1, 0.2}, {3.0, -1.0}, {0.0, 9.0}};
  const auto v = sigma_hat(m, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(v[i] == sigma_hat(m, pts[i]));
}

TEST_CASE("density norms") {
  const auto m = make_circle_measure(128);
  const auto f = Density::random_phases(m, 7);
  CHECK(f.l1_norm() == Approx(two_pi).epsilon(1e-12));
  CHECK(f.l2_norm() == Approx(std::sqrt(two_pi)).epsilon(1e-12));
  const auto g = Density::random_phases(m, 7);
  CHECK(f.values() == g.values());
  CHECK_THROWS_AS(Density(m, std::vector<complex>(3)), Error);
}

TEST_CASE("extend with f = 1 samples sigma_hat") {
  const auto m = make_circle_measure(256);
  const RealGrid shape(4.0, 16);
  const auto Ef = extend(m, Density::constant(m), shape);
  for (std::size_t k = 0; k < shape.cell_count(); k += 7)
    CHECK(std::abs(Ef[k] - sigma_hat(m, shape.center(k))) <= 1e-12);
}

TEST_CASE("extend of zero is zero and of one node is unimodular") {
  const auto m = make_circle_measure(32);
  const RealGrid shape(3.0, 8);
  const auto Z = extend(m, Density::constant(m, 0.0), shape);
  for (const auto& z : Z.values()) CHECK(z == complex(0.0));
  const auto p = make_point_measure({0.3, -0.7}, 1.0);
  const auto E = extend(p, Density::constant(p), shape);
  for (const auto& z : E.values()) CHECK(std::abs(std::abs(z) - 1.0) <= 1e-14);
  CHECK_THROWS_AS(extend(m, Density::constant(p), shape), Error);
}

TEST_CASE("extend is bounded by the L1 norm and linear") {
  const auto m = make_convex_graph_measure(exp_flat_curve(2.0, 0.3), 256, 0.05);
  const RealGrid shape(8.0, 32);
  const auto f = Density::random_phases(m, 1);
  const auto g = Density::random_phases(m, 2);
  std::vector<complex> sum(m.size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = f[i] + g[i];
  const auto Ef = extend(m, f, shape), Eg = extend(m, g, shape);
  const auto Es = extend(m, Density(m, sum), shape);
  double scale = 0.0;
  for (std::size_t k = 0; k < shape.cell_count(); ++k) {
    CHECK(std::abs(Ef[k]) <= f.l1_norm() * (1.0 + 1e-12));
    scale = std::max(scale, std::abs(Es[k]));
  }
  for (std::size_t k = 0; k < shape.cell_count(); ++k)
    CHECK(std::abs(Es[k] - Ef[k] - Eg[k]) <= 1e-12 * scale);
}

TEST_CASE("sequential and parallel extension agree exactly") {
  const auto m = make_circle_measure(512);
  const RealGrid shape(6.0, 32);
  const auto f = Density::random_phases(m, 3);
  set_sequential(true);
  const auto a = extend(m, f, shape);
  set_sequential(false);
  const auto b = extend(m, f, shape);
  CHECK(a.values() == b.values());
}

TEST_CASE("psi values and partition of unity") {
  CHECK(psi0(0.5) == 1.0);
  CHECK(psi0(3.0) == 0.0);
  CHECK(psi0(-1.0) == 1.0);
  CHECK(psi0(2.0) == 0.0);
  CHECK(psi0(1.5) == Approx(0.5));
  CHECK(psi(3, 5.0) == Approx(1.0 - psi0(1.25)).epsilon(1e-15));
  for (double r = -2048.0; r <= 2048.0; r += 0.37) {
    double s = 0.0;
    for (int l = 0; l <= 12; ++l) s += psi(l, r);
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  for (int l = 1; l <= 6; ++l) {
    const double lo = std::ldexp(1.0, l - 1), hi = std::ldexp(1.0, l + 1);
    CHECK(psi(l, lo) == 0.0);
    CHECK(psi(l, hi) == 0.0);
    CHECK(psi(l, -0.5 * lo) == 0.0);
    CHECK(psi(l, 1.01 * hi) == 0.0);
    CHECK(psi(l, 1.2 * lo) > 0.0);
    CHECK(psi(l, 0.9 * hi) > 0.0);
    for (double r = 0.0; r < 4.0 * hi; r += hi / 97.0) {
      CHECK(psi(l, r) >= 0.0);
      CHECK(psi(l, r) <= 1.0);
    }
  }
}

TEST_CASE("Halton coordinates") {
  CHECK(halton(0, 2) == 0.5);
  CHECK(halton(1, 2) == 0.25);
  CHECK(halton(2, 2) == 0.75);
  CHECK(halton(0, 3) == Approx(1.0 / 3.0));
  CHECK(halton(1, 3) == Approx(2.0 / 3.0));
}

TEST_CASE("block bounds are bounded by the total mass") {
  const auto circle = make_circle_measure(1024);
  CHECK(block_bounds_tensor(circle, 0, 0, 256).max_value <= two_pi * (1.0 + 1e-12));
  CHECK(block_bounds_directional(circle, {0.0, 1.0}, 0, 256, 64.0).max_value <=
        two_pi * (1.0 + 1e-12));
  CHECK_THROWS_AS(block_bounds_tensor(circle, 1, 1, 10), Error);
}

TEST_CASE("flat segment block bounds decay like 1/|x1|") {
  // Enough nodes to resolve |x1| up to 2^11.
  const auto m = make_flat_segment_measure(16384);
  for (int mm : {0, 3}) {
    const auto b = block_bounds_tensor(m, 8, mm, 512);
    CHECK(b.max_value <= 1.0 / (oracle::pi * 128.0) * (1.0 + 1e-9));
  }
  std::vector<int> levels;
  std::vector<double> maxima;
  for (int l = 4; l <= 10; ++l) {
    levels.push_back(l);
    maxima.push_back(block_bounds_directional(m, {1.0, 0.0}, l, 512, 64.0).max_value);
  }
  CHECK(slope_of_log2_max(levels, maxima) == Approx(-1.0).margin(0.1));
}

TEST_CASE("circle tensor blocks decay like 2^{-(l+m)/4}") {
  const auto m = make_circle_measure(8192);
  std::vector<int> levels;
  std::vector<double> maxima;
  for (int l = 4; l <= 9; ++l) {
    levels.push_back(2 * l);
    maxima.push_back(block_bounds_tensor(m, l, l, 1024).max_value);
  }
  CHECK(slope_of_log2_max(levels, maxima) == Approx(-0.25).margin(0.1));
}

TEST_CASE("decay fit on the flat segment") {
  const auto m = make_flat_segment_measure(2048);
  const auto s = sample_ray(m, {1.0, 0.0}, 1.0, 1000.0, 400);
  const auto fit = fit_decay(s, DecayRegime::Directional, {1.0, 0.0});
  CHECK(fit.exponent >= 0.9);
  CHECK(fit.exponent <= 1.1);
  CHECK(std::isfinite(fit.residual));
  CHECK(fit.gauge_min >= 1.0);
  CHECK(fit.gauge_max <= 1000.0 * (1 + 1e-12));
  CHECK(fit.used + fit.dropped_zero + fit.dropped_region == s.size());
  for (const auto& x : s)
    if (x.value >= decay_zero_threshold)
      CHECK(x.value * std::pow(std::abs(x.x.x1), fit.exponent) <= fit.constant * (1 + 1e-12));
}

TEST_CASE("decay fit on the circle along several directions") {
  const auto m = make_circle_measure(16384);
  for (Vec2 v : {Vec2{1.0, 0.0}, Vec2{0.6, 0.8}, normalized(Vec2{-1.0, 3.0})}) {
    const auto fit = fit_decay(sample_ray(m, v, 1.0, 1000.0, 400), DecayRegime::Directional, v);
    CHECK(fit.exponent >= 0.45);
    CHECK(fit.exponent <= 0.55);
  }
}

TEST_CASE("decay fit of a point mass is flat") {
  const auto p = make_point_measure({0.2, 0.1}, 1.5);
  const auto fit = fit_decay(sample_ray(p, {1.0, 0.0}, 1.0, 100.0, 50), DecayRegime::Directional);
  CHECK(std::abs(fit.exponent) <= 1e-12);
  CHECK(fit.constant == Approx(1.5));
}

TEST_CASE("decay fit needs 16 usable samples") {
  const auto p = make_point_measure({0.2, 0.1}, 1.0);
  CHECK_THROWS_MATCHES(
      fit_decay(sample_ray(p, {1.0, 0.0}, 1.0, 100.0, 15), DecayRegime::Directional), Error,
      Catch::Matchers::Predicate<Error>(
          [](const Error& e) { return e.kind() == ErrorKind::InsufficientData; }));
  // Out-of-region samples do not count.
  CHECK_THROWS_AS(fit_decay(sample_ray(p, {0.0, 1.0}, 1.0, 100.0, 40), DecayRegime::TensorAxis1),
                  Error);
}

TEST_CASE("decay gauges by regime") {
  CHECK(decay_gauge({3.0, 0.5}, DecayRegime::TensorAxis1, {}) == 3.0);
  CHECK(decay_gauge({3.0, 2.0}, DecayRegime::TensorAxis1, {}) < 0.0);
  CHECK(decay_gauge({0.5, -4.0}, DecayRegime::TensorAxis2, {}) == 4.0);
  CHECK(decay_gauge({-2.0, 3.0}, DecayRegime::TensorProduct, {}) == 6.0);
  CHECK(decay_gauge({0.5, 3.0}, DecayRegime::TensorProduct, {}) < 0.0);
  CHECK(decay_gauge({3.0, 4.0}, DecayRegime::Directional, {0.6, 0.8}) == Approx(5.0));
}

TEST_CASE("circle on the diagonal decays like |x1 x2|^{-1/4}") {
  const auto m = make_circle_measure(16384);
  const auto fit = fit_decay(sample_diagonal(m, 1.0, 300.0, 400), DecayRegime::TensorProduct);
  CHECK(fit.exponent == Approx(0.25).margin(0.05));
}
