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

#ifndef OLAB_RANDOM_HPP
#define OLAB_RANDOM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "olab/projections.hpp"
#include "olab/spectral.hpp"

namespace olab {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Complex standard Gaussian for the stream (seed, sample_index, k): real and
/// imaginary parts are independent N(0, 1), so E|g|^2 = 2. Pure function of
/// its arguments.
cplx gaussian_coefficient(std::uint64_t seed, std::uint64_t sample_index, int k);

struct GaussianDraw {
  int k_min = 0;
  int k_max = -1;
  std::vector<cplx> coefficients;  // coefficients[i] is g_{k_min + i}
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;

  const cplx& operator()(int k) const { return coefficients.at(static_cast<std::size_t>(k - k_min)); }
};

GaussianDraw sample_draw(int k_min, int k_max, std::uint64_t seed, std::uint64_t sample_index);

/// Draw with every coefficient equal to value.
GaussianDraw constant_draw(int k_min, int k_max, cplx value);

/// f^omega = sum_k g_k psi(D - k) f, accumulated in k order per grid point.
SpectralProfile randomize(const SpectralProfile& p, const GaussianDraw& draw);
SpectralProfile randomize(const WienerDecomposition& d, const GaussianDraw& draw);

struct KhinchineResult {
  double p = 2.0;
  double ratio = 0.0;      // ||sum g_k c_k||_{L^p_omega} / (sqrt(p) ||c||_2)
  double std_error = 0.0;  // delta-method standard error of ratio
  std::size_t n_samples = 0;
};

KhinchineResult khinchine_check(const std::vector<cplx>& c, double p, std::size_t n_samples,
                                std::uint64_t seed);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double halfwidth() const { return 0.5 * (hi - lo); }
};

/// 95% Wilson score interval for `successes` out of n.
WilsonInterval wilson_interval(std::size_t successes, std::size_t n);

struct TailCurve {
  double alpha = 0.0;
  double x = 0.0;
  std::vector<double> t_values;
  std::vector<double> empirical_probs;
  std::vector<std::size_t> exceed_counts;
  std::vector<WilsonInterval> wilson;
  std::size_t n_samples = 0;
};

struct StochasticContinuityParams {
  double x = 0.0;
  double alpha = 0.5;
  std::vector<double> t_values;  // strictly decreasing, >= 0
  std::size_t n_samples = 2000;
  std::uint64_t seed = 0;
  Branch sign = Branch::plus;
};

/// Fraction of draws with |U(t) f^omega(x) - f^omega(x)| > alpha. The same
/// draws are reused for every t.
TailCurve stochastic_continuity(const SpectralProfile& p, const StochasticContinuityParams& params);

constexpr double kEulerSquared() { return 7.389056098930650227; }

/// 3 C1 exp(-(alpha / (2 C e eps))^2).
double tail_bound_curve(double alpha, double epsilon, double c_fit, double c1 = kEulerSquared());

struct TailOverlay {
  double c_fit = 0.0;
  double c1 = kEulerSquared();
  std::size_t touch_index = 0;
  std::vector<double> bound;  // bound at eps = sqrt(t) for each t of the curve
  bool dominates_below = true;  // bound >= empirical at every t below the touch
  bool valid = false;
};

/// Smallest C for which the bound with eps = sqrt(t) is at least the
/// empirical probability at every t > 0; it touches the curve at touch_index.
TailOverlay fit_tail_overlay(const TailCurve& curve, double c1 = kEulerSquared());

struct TailShape {
  std::vector<double> alphas;
  std::vector<double> probs;
  std::size_t n_samples = 0;
  std::size_t points_used = 0;  // alphas with prob >= 10 / n
  double slope = 0.0;           // of log P against alpha^2
  double intercept = 0.0;
  double correlation = 0.0;
  double c1 = 0.0;  // smallest prefactor with c1 exp(-c2 a^2) >= P at every used alpha
  double c2 = 0.0;
};

/// Empirical P(|U(t) h^omega(x)| > alpha) over the alpha grid, with the
/// log-linear fit in alpha^2 restricted to probabilities >= 10 / n.
TailShape gaussian_tail_shape(const SpectralProfile& h, double x, double t, const std::vector<double>& alphas,
                              std::size_t n_samples, std::uint64_t seed, Branch sign = Branch::plus);

}  // namespace olab

#endif  // OLAB_RANDOM_HPP
