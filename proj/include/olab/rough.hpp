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

#ifndef OLAB_ROUGH_HPP
#define OLAB_ROUGH_HPP

#include <utility>
#include <vector>

#include "olab/spectral.hpp"

namespace olab {

/// Band-limited data with flat spectrum 2^{-k(s+1/2)} on 2^k <= |xi| <= 2^{k+1}.
struct CounterexampleSpec {
  int k = 1;
  double s = 0.0;
};

// Minimum number of grid cells across one band [2^k, 2^{k+1}].
inline constexpr int kMinBandCells = 64;

/// Midpoint grid: band edges fall on cell boundaries, so every sample lies
/// strictly inside or strictly outside the band and xi = 0 is never sampled.
/// xi_step must divide 2^k into at least kMinBandCells cells.
SpectralProfile counterexample_profile(const CounterexampleSpec& spec, double xi_step);

/// Amplitude of the counterexample family inside its band.
double counterexample_height(const CounterexampleSpec& spec);

/// n_t times t_max * 10^{-4 j / n_t}, j = n_t - 1 .. 0, ascending. Doubling
/// n_t yields a superset.
std::vector<double> maximal_time_grid(double t_max, int n_t);

struct MaximalScan {
  XGrid grid;
  std::vector<double> sup_values;
  std::vector<double> argmax_t;
  int n_t = 0;
  double t_max = 0.0;
  bool refined = false;
};

struct MaximalScanOptions {
  Branch sign = Branch::plus;
  int n_t = 256;
  // Re-sample 8 points around the per-x argmax.
  bool refine = true;
};

MaximalScan maximal_scan(const SpectralProfile& p, double t_max, const XGrid& grid,
                         const MaximalScanOptions& opt = {});

struct CounterexampleParams {
  Branch sign = Branch::plus;
  int n_t = 256;
  int n_x = 129;
  int band_cells = 128;
  bool refine = true;
};

struct CounterexampleResult {
  int k = 0;
  double ratio = 0.0;       // R_k
  double sup_l4 = 0.0;      // L^4 over |x| <= 2^{-k} of the maximal scan
  double hs = 0.0;          // ||f_k||_{H^s}
  double t_max = 0.0;
};

/// L^4 over |x| <= 2^{-k} of sup_{0 < t <= 2^{-3k}/100} |U(t) f_k| divided by
/// ||f_k||_{H^s}.
CounterexampleResult counterexample_ratio(const CounterexampleSpec& spec,
                                          const CounterexampleParams& params = {});

struct ScalingFit {
  std::vector<std::pair<double, double>> points;  // (k, R_k)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log2 R_k - fit|
};

/// Least-squares line through (k, log2 R_k). Needs >= 3 points, positive R
/// and at least two distinct k.
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points);

/// |U(t)f(x) - f(x)| for each t of a strictly decreasing, nonnegative list.
std::vector<double> convergence_trace(const SpectralProfile& p, double x,
                                      const std::vector<double>& t_sequence, Branch sign);

}  // namespace olab

#endif  // OLAB_ROUGH_HPP
