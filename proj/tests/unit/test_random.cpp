/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================
*/

#include <doctest.h>

#include <cmath>

#include "olab/profiles.hpp"
#include "olab/random.hpp"

using namespace olab;

namespace {

// E|g|^p for a complex Gaussian with unit-variance parts: |g|^2 is chi-squared
// with two degrees of freedom, density e^{-u/2}/2. Integrated numerically.
double moment_oracle(double p) {
  const int n = 400000;
  const double top = 200.0;
  const double du = top / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = i * du;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::pow(u, p / 2.0) * 0.5 * std::exp(-0.5 * u);
  }
  return acc * du / 3.0;
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using A4 = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("moment oracle") {
  CHECK(moment_oracle(2.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(moment_oracle(4.0) == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(moment_oracle(8.0) == doctest::Approx(384.0).epsilon(1e-9));  // 2^4 * 4!
}

TEST_CASE("draws are pure functions of their stream") {
  const GaussianDraw a = sample_draw(-3, 5, 42, 7);
  const GaussianDraw b = sample_draw(-3, 5, 42, 7);
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.coefficients.size() == 9);
  CHECK(a(2) == gaussian_coefficient(42, 7, 2));
  CHECK(sample_draw(-3, 5, 43, 7).coefficients != a.coefficients);
  CHECK(sample_draw(-3, 5, 42, 8).coefficients != a.coefficients);
  CHECK_THROWS(sample_draw(2, 1, 0, 0));
}

TEST_CASE("coefficient moments") {
  const int n = 100000;
  double mr = 0.0, mi = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx g = gaussian_coefficient(1, static_cast<std::uint64_t>(i), 3);
    mr += g.real();
    mi += g.imag();
    m2 += std::norm(g);
  }
  CHECK(std::abs(mr / n) <= 4.0 / std::sqrt(n));
  CHECK(std::abs(mi / n) <= 4.0 / std::sqrt(n));
  CHECK(std::abs(m2 / n - 2.0) <= 0.05);
}

TEST_CASE("randomize with unit and zero coefficients") {
  const SpectralProfile p = default_random_profile();
  const WienerDecomposition d = wiener_decompose(p);
  const SpectralProfile one = randomize(p, constant_draw(d.k_min, d.k_max, cplx(1.0)));
  for (std::size_t j = 0; j < p.size(); ++j) CHECK(one[j] == p[j]);
  CHECK(randomize(p, constant_draw(d.k_min, d.k_max, cplx(0.0))).is_zero());
  CHECK_THROWS(randomize(p, constant_draw(d.k_min + 1, d.k_max, cplx(1.0))));
  // A wider draw is fine.
  CHECK_NOTHROW(randomize(d, sample_draw(d.k_min - 2, d.k_max + 2, 0, 0)));
}

TEST_CASE("mean energy of the randomized profile") {
  const SpectralProfile p = midpoint_profile(0.0, 4.0, 0x1p-6, [](double xi) { return cplx(gaussian_bump(xi, 2.0, 0.4)); });
  const WienerDecomposition d = wiener_decompose(p);
  double oracle = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    double w2 = 0.0;
    for (int k = d.k_min; k <= d.k_max; ++k) w2 += std::pow(wiener_window(p.xi(j) - k), 2);
    oracle += 2.0 * w2 * std::norm(p[j]) * p.xi_step();
  }
  const int n = 10000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = std::pow(l2_norm(randomize(d, sample_draw(d.k_min, d.k_max, 5, static_cast<std::uint64_t>(i)))), 2);
    s += e;
    s2 += e * e;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::abs(mean - oracle) <= 3.0 * se);
}

TEST_CASE("Khinchine ratios") {
  const std::vector<cplx> c = {cplx(1.0), cplx(0.5), cplx(0.0, 0.25), cplx(-0.125)};
  const KhinchineResult r2 = khinchine_check(c, 2.0, 100000, 9);
  CHECK(std::abs(r2.ratio - 1.0) <= 3.0 * r2.std_error);
  const KhinchineResult spike = khinchine_check({cplx(2.0)}, 4.0, 100000, 9);
  const double exact = std::pow(moment_oracle(4.0), 0.25) / 2.0;
  CHECK(exact == doctest::Approx(std::pow(8.0, 0.25) / 2.0));
  CHECK(std::abs(spike.ratio - exact) <= 3.0 * spike.std_error);
  for (double p : {4.0, 8.0, 16.0}) CHECK(khinchine_check(c, p, 20000, 9).ratio <= 2.0);
  CHECK_THROWS(khinchine_check(c, 1.5, 10, 0));
  CHECK_THROWS(khinchine_check({cplx(0.0)}, 2.0, 10, 0));
  // Same seed, same numbers.
  CHECK(khinchine_check(c, 4.0, 5000, 3).ratio == khinchine_check(c, 4.0, 5000, 3).ratio);
}

TEST_CASE("Wilson interval") {
  const WilsonInterval z = wilson_interval(0, 2000);
  CHECK(z.lo == 0.0);
  CHECK(z.hi > 0.0);
  CHECK(z.halfwidth() > 0.0);
  const WilsonInterval f = wilson_interval(2000, 2000);
  CHECK(f.hi == 1.0);
  const WilsonInterval m = wilson_interval(50, 100);
  CHECK(m.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(m.hi == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK_THROWS(wilson_interval(0, 0));
}

TEST_CASE("stochastic continuity curve") {
  const SpectralProfile p = default_random_profile();
  StochasticContinuityParams params;
  params.t_values = {0.1, 0.01, 0.001, 1e-4, 0.0};
  const TailCurve c = stochastic_continuity(p, params);
  REQUIRE(c.empirical_probs.size() == 5);
  CHECK(c.empirical_probs.back() == 0.0);
  CHECK(c.empirical_probs[0] > 0.0);
  for (std::size_t i = 1; i < 5; ++i) CHECK(c.empirical_probs[i] <= c.empirical_probs[i - 1]);
  for (const auto& w : c.wilson) CHECK(w.halfwidth() > 0.0);

  params.alpha = 1e6;
  const TailCurve big = stochastic_continuity(p, params);
  for (double pr : big.empirical_probs) CHECK(pr == 0.0);

  params.t_values = {0.01, 0.1};
  CHECK_THROWS(stochastic_continuity(p, params));
  params.t_values = {100.0};
  params.alpha = 0.5;
  CHECK_THROWS_AS(stochastic_continuity(p, params), ResolutionError);
}

TEST_CASE("tail bound curve and overlay") {
  CHECK(tail_bound_curve(100.0, 0.1, 1.0) < 1e-100);
  CHECK(tail_bound_curve(0.5, 0.2, 1.0) > tail_bound_curve(0.5, 0.1, 1.0));
  CHECK(tail_bound_curve(1e-12, 1.0, 1.0) == doctest::Approx(3.0 * kEulerSquared()));
  CHECK_THROWS(tail_bound_curve(0.0, 0.1, 1.0));

  StochasticContinuityParams params;
  params.t_values = {0.1, 0.05, 0.02, 0.01, 0.001};
  const TailCurve c = stochastic_continuity(default_random_profile(), params);
  const TailOverlay o = fit_tail_overlay(c);
  REQUIRE(o.valid);
  CHECK(o.bound[o.touch_index] == doctest::Approx(c.empirical_probs[o.touch_index]).epsilon(1e-12));
  CHECK(o.dominates_below);
}

TEST_CASE("Gaussian tail shape") {
  std::vector<double> alphas;
  for (int i = 1; i <= 15; ++i) alphas.push_back(0.1 * i);
  const TailShape s = gaussian_tail_shape(default_random_profile(), 0.0, 0.0, alphas, 100000, 1);
  CHECK(s.points_used >= 5);
  CHECK(s.slope < 0.0);
  CHECK(s.correlation <= -0.99);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (s.probs[i] >= 10.0 / 100000) CHECK(s.c1 * std::exp(-s.c2 * alphas[i] * alphas[i]) >= s.probs[i] * (1 - 1e-12));
  }
}
