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

#include "olab/random.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "parallel.hpp"

namespace olab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

// Fourth counter word; separates these streams from any other use of a seed.
constexpr std::uint32_t kCoefficientStream = 0x67636f65u;

constexpr double kWilsonZ = 1.959963984540054;

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 64) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

void require_decreasing_times(const std::vector<double>& ts) {
  if (ts.empty()) throw std::invalid_argument("time list is empty");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] >= 0.0)) throw std::invalid_argument("times must be >= 0");
    if (i > 0 && !(ts[i] < ts[i - 1])) throw std::invalid_argument("times must be strictly decreasing");
  }
}

cplx point_deviation(const SpectralProfile& piece, const PropagatorConfig& cfg, double x) {
  if (cfg.t == 0.0L || piece.is_zero()) return {};
  return deviation_unchecked(piece, cfg, XGrid{x, 1.0, 1}).values[0];
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ key[0], lo1, hi0 ^ c[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return c;
}

cplx gaussian_coefficient(std::uint64_t seed, std::uint64_t sample_index, int k) {
  const auto w = philox4x32(
      {static_cast<std::uint32_t>(sample_index), static_cast<std::uint32_t>(sample_index >> 32),
       static_cast<std::uint32_t>(k), kCoefficientStream},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const std::uint64_t a = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
  const std::uint64_t b = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1p-53;  // (0, 1]
  const double u2 = static_cast<double>(b >> 11) * 0x1p-53;          // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  return {r * std::cos(angle), r * std::sin(angle)};
}

GaussianDraw sample_draw(int k_min, int k_max, std::uint64_t seed, std::uint64_t sample_index) {
  if (k_max < k_min) throw std::invalid_argument("sample_draw: empty k range");
  GaussianDraw d{k_min, k_max, {}, seed, sample_index};
  d.coefficients.reserve(static_cast<std::size_t>(k_max - k_min + 1));
  for (int k = k_min; k <= k_max; ++k) d.coefficients.push_back(gaussian_coefficient(seed, sample_index, k));
  return d;
}

GaussianDraw constant_draw(int k_min, int k_max, cplx value) {
  if (k_max < k_min) throw std::invalid_argument("constant_draw: empty k range");
  return {k_min, k_max, std::vector<cplx>(static_cast<std::size_t>(k_max - k_min + 1), value), 0, 0};
}

SpectralProfile randomize(const WienerDecomposition& d, const GaussianDraw& draw) {
  if (d.pieces.empty()) throw std::invalid_argument("randomize: empty decomposition");
  if (draw.k_min > d.k_min || draw.k_max < d.k_max)
    throw std::invalid_argument("randomize: draw k range [" + std::to_string(draw.k_min) + ", " +
                                std::to_string(draw.k_max) + "] does not cover [" + std::to_string(d.k_min) +
                                ", " + std::to_string(d.k_max) + "]");
  const std::size_t n = d.pieces.front().size();
  std::vector<cplx> acc(n);
  for (int k = d.k_min; k <= d.k_max; ++k) {
    const SpectralProfile& piece = d.piece(k);
    const cplx g = draw(k);
    for (std::size_t j = 0; j < n; ++j)
      if (piece[j] != cplx{}) acc[j] += g * piece[j];
  }
  return d.pieces.front().with_amplitudes(std::move(acc));
}

SpectralProfile randomize(const SpectralProfile& p, const GaussianDraw& draw) {
  if (p.is_zero()) return p;
  return randomize(wiener_decompose(p), draw);
}

KhinchineResult khinchine_check(const std::vector<cplx>& c, double p, std::size_t n_samples, std::uint64_t seed) {
  if (!(p >= 2.0)) throw std::invalid_argument("khinchine_check needs p >= 2");
  if (n_samples < 2) throw std::invalid_argument("khinchine_check needs at least 2 samples");
  double c2 = 0.0;
  for (const cplx& v : c) c2 += std::norm(v);
  if (c2 == 0.0) throw std::invalid_argument("khinchine_check: coefficients are all zero");

  std::vector<double> moments(n_samples);
  detail::parallel_for(n_samples, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      cplx s{};
      for (std::size_t k = 0; k < c.size(); ++k) s += gaussian_coefficient(seed, i, static_cast<int>(k)) * c[k];
      moments[i] = std::pow(std::abs(s), p);
    }
  });
  const double n = static_cast<double>(n_samples);
  const double mean = pairwise_sum(moments) / n;
  for (double& m : moments) m = (m - mean) * (m - mean);
  const double var = pairwise_sum(moments) / (n - 1.0);

  KhinchineResult r;
  r.p = p;
  r.n_samples = n_samples;
  const double scale = std::sqrt(p) * std::sqrt(c2);
  r.ratio = std::pow(mean, 1.0 / p) / scale;
  // d/dm m^{1/p} = m^{1/p} / (p m)
  r.std_error = r.ratio / (p * mean) * std::sqrt(var / n);
  return r;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t n) {
  if (n == 0) throw std::invalid_argument("wilson_interval needs n > 0");
  const double nn = static_cast<double>(n);
  const double ph = static_cast<double>(successes) / nn;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / nn;
  const double centre = (ph + z2 / (2.0 * nn)) / denom;
  const double half = kWilsonZ / denom * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn));
  // The closed form is exact at the ends; rounding would leave a 1e-19 residue.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == n ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

TailCurve stochastic_continuity(const SpectralProfile& p, const StochasticContinuityParams& params) {
  require_decreasing_times(params.t_values);
  if (!(params.alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (params.n_samples == 0) throw std::invalid_argument("n_samples must be > 0");
  const ResolutionReport res = validate_resolution(p, {params.sign, params.t_values.front()});
  if (!res.ok) throw ResolutionError(res);

  const WienerDecomposition d = wiener_decompose(p);
  const std::size_t n_t = params.t_values.size();
  const std::size_t n_k = d.count();

  // U(t) f^omega - f^omega = sum_k g_k (U(t) - 1) psi(D - k) f by linearity.
  std::vector<std::vector<cplx>> dev(n_t, std::vector<cplx>(n_k));
  for (std::size_t i = 0; i < n_t; ++i)
    for (std::size_t k = 0; k < n_k; ++k)
      dev[i][k] = point_deviation(d.pieces[k], {params.sign, params.t_values[i]}, params.x);

  std::vector<std::vector<unsigned char>> exceed(n_t, std::vector<unsigned char>(params.n_samples));
  detail::parallel_for(params.n_samples, [&](std::size_t b, std::size_t e) {
    std::vector<cplx> g(n_k);
    for (std::size_t s = b; s < e; ++s) {
      for (std::size_t k = 0; k < n_k; ++k) g[k] = gaussian_coefficient(params.seed, s, d.k_min + static_cast<int>(k));
      for (std::size_t i = 0; i < n_t; ++i) {
        cplx z{};
        for (std::size_t k = 0; k < n_k; ++k) z += g[k] * dev[i][k];
        exceed[i][s] = std::abs(z) > params.alpha ? 1 : 0;
      }
    }
  });

  TailCurve curve;
  curve.alpha = params.alpha;
  curve.x = params.x;
  curve.t_values = params.t_values;
  curve.n_samples = params.n_samples;
  for (std::size_t i = 0; i < n_t; ++i) {
    std::size_t count = 0;
    for (unsigned char v : exceed[i]) count += v;
    curve.exceed_counts.push_back(count);
    curve.empirical_probs.push_back(static_cast<double>(count) / static_cast<double>(params.n_samples));
    curve.wilson.push_back(wilson_interval(count, params.n_samples));
  }
  return curve;
}

double tail_bound_curve(double alpha, double epsilon, double c_fit, double c1) {
  if (!(alpha > 0.0 && epsilon > 0.0 && c_fit > 0.0 && c1 > 0.0))
    throw std::invalid_argument("tail_bound_curve parameters must be > 0");
  const double z = alpha / (2.0 * c_fit * std::exp(1.0) * epsilon);
  return 3.0 * c1 * std::exp(-z * z);
}

TailOverlay fit_tail_overlay(const TailCurve& curve, double c1) {
  TailOverlay o;
  o.c1 = c1;
  o.bound.assign(curve.t_values.size(), 0.0);
  // Each positive point asks for its own C; the largest one dominates them all.
  for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
    const double t = curve.t_values[i];
    const double pr = curve.empirical_probs[i];
    if (!(t > 0.0) || !(pr > 0.0)) continue;
    const double c = curve.alpha / (2.0 * std::exp(1.0) * std::sqrt(t) * std::sqrt(std::log(3.0 * c1 / pr)));
    if (!o.valid || c > o.c_fit) {
      o.c_fit = c;
      o.touch_index = i;
      o.valid = true;
    }
  }
  if (!o.valid) return o;
  for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
    const double t = curve.t_values[i];
    o.bound[i] = t > 0.0 ? tail_bound_curve(curve.alpha, std::sqrt(t), o.c_fit, c1) : 0.0;
    if (i > o.touch_index && o.bound[i] < curve.empirical_probs[i] * (1.0 - 1e-12)) o.dominates_below = false;
  }
  return o;
}

TailShape gaussian_tail_shape(const SpectralProfile& h, double x, double t, const std::vector<double>& alphas,
                              std::size_t n_samples, std::uint64_t seed, Branch sign) {
  if (n_samples == 0) throw std::invalid_argument("n_samples must be > 0");
  if (h.is_zero()) throw std::invalid_argument("gaussian_tail_shape: zero profile");
  const PropagatorConfig cfg{sign, t};
  const ResolutionReport res = validate_resolution(h, cfg);
  if (!res.ok) throw ResolutionError(res);

  const WienerDecomposition d = wiener_decompose(h);
  std::vector<cplx> c(d.count());
  for (std::size_t k = 0; k < d.count(); ++k)
    if (!d.pieces[k].is_zero()) c[k] = synthesize_at(evolve_spectral(d.pieces[k], cfg), x);

  std::vector<double> mags(n_samples);
  detail::parallel_for(n_samples, [&](std::size_t b, std::size_t e) {
    for (std::size_t s = b; s < e; ++s) {
      cplx z{};
      for (std::size_t k = 0; k < c.size(); ++k) z += gaussian_coefficient(seed, s, d.k_min + static_cast<int>(k)) * c[k];
      mags[s] = std::abs(z);
    }
  });

  TailShape shape;
  shape.alphas = alphas;
  shape.n_samples = n_samples;
  const double floor_prob = 10.0 / static_cast<double>(n_samples);
  std::vector<double> xs, ys;
  for (double a : alphas) {
    const auto count = static_cast<std::size_t>(std::count_if(mags.begin(), mags.end(), [a](double m) { return m > a; }));
    const double pr = static_cast<double>(count) / static_cast<double>(n_samples);
    shape.probs.push_back(pr);
    if (pr >= floor_prob) {
      xs.push_back(a * a);
      ys.push_back(std::log(pr));
    }
  }
  shape.points_used = xs.size();
  if (xs.size() < 3) return shape;

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  shape.slope = sxy / sxx;
  shape.intercept = my - shape.slope * mx;
  shape.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  shape.c2 = -shape.slope;
  for (std::size_t i = 0; i < xs.size(); ++i)
    shape.c1 = std::max(shape.c1, std::exp(ys[i] + shape.c2 * xs[i]));
  return shape;
}

}  // namespace olab
