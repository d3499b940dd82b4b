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

#include "olab/rough.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace olab {

double counterexample_height(const CounterexampleSpec& spec) {
  return std::exp2(-spec.k * (spec.s + 0.5));
}

SpectralProfile counterexample_profile(const CounterexampleSpec& spec, double xi_step) {
  if (spec.k < 1) throw std::invalid_argument("counterexample needs k >= 1");
  if (!(xi_step > 0.0)) throw std::invalid_argument("xi_step must be > 0");
  const double lo = std::exp2(spec.k);
  const double hi = 2.0 * lo;
  const double cells = lo / xi_step;
  const double whole = std::round(cells);
  if (std::abs(cells - whole) > 1e-9 * cells)
    throw std::invalid_argument("xi_step must divide the band [2^k, 2^{k+1}] into whole cells");
  if (whole < kMinBandCells)
    throw std::invalid_argument("xi_step too coarse: band needs at least 64 cells");
  const auto n_band = static_cast<std::size_t>(whole);
  constexpr std::size_t pad = 4;
  // Cells from -(hi + pad) to hi + pad, sampled at their midpoints.
  const std::size_t half = 2 * n_band + pad;  // cells on one side, hi / xi_step = 2 n_band
  const std::size_t n = 2 * half;
  const double edge = static_cast<double>(half) * xi_step;
  const double height = counterexample_height(spec);
  std::vector<cplx> amps(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::abs(-edge + (static_cast<double>(j) + 0.5) * xi_step);
    if (a > lo && a < hi) amps[j] = height;
  }
  return SpectralProfile(-edge + 0.5 * xi_step, xi_step, std::move(amps));
}

std::vector<double> maximal_time_grid(double t_max, int n_t) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
  if (n_t < 1) throw std::invalid_argument("n_t must be >= 1");
  std::vector<double> ts(static_cast<std::size_t>(n_t));
  for (int j = 0; j < n_t; ++j)
    ts[static_cast<std::size_t>(n_t - 1 - j)] = t_max * std::pow(10.0, -4.0 * j / n_t);
  return ts;
}

MaximalScan maximal_scan(const SpectralProfile& p, double t_max, const XGrid& grid,
                         const MaximalScanOptions& opt) {
  const PropagatorConfig at_max{opt.sign, t_max};
  const ResolutionReport res = validate_resolution(p, at_max);
  if (!res.ok) throw ResolutionError(res);

  const std::vector<double> ts = maximal_time_grid(t_max, opt.n_t);
  MaximalScan scan;
  scan.grid = grid;
  scan.n_t = opt.n_t;
  scan.t_max = t_max;
  scan.sup_values.assign(grid.count, 0.0);
  scan.argmax_t.assign(grid.count, ts.front());
  std::vector<std::size_t> argmax(grid.count, 0);

  for (std::size_t i = 0; i < ts.size(); ++i) {
    const SpaceField u = synthesize(evolve_spectral(p, {opt.sign, ts[i]}), grid);
    for (std::size_t j = 0; j < grid.count; ++j) {
      const double v = std::abs(u.values[j]);
      if (v > scan.sup_values[j] || i == 0) {
        scan.sup_values[j] = v;
        argmax[j] = i;
      }
    }
  }
  for (std::size_t j = 0; j < grid.count; ++j) scan.argmax_t[j] = ts[argmax[j]];

  if (opt.refine && ts.size() > 1) {
    scan.refined = true;
    const double ratio = ts[1] / ts[0];
    detail::parallel_for(grid.count, [&](std::size_t b, std::size_t e) {
      for (std::size_t j = b; j < e; ++j) {
        const std::size_t i = argmax[j];
        const double lo = i > 0 ? ts[i - 1] : ts[0] / ratio;
        const double hi = i + 1 < ts.size() ? ts[i + 1] : t_max;
        if (!(hi > lo)) continue;
        const double x = grid.x(j);
        for (int m = 1; m <= 8; ++m) {
          const double t = lo * std::pow(hi / lo, m / 9.0);
          const double v = std::abs(synthesize_at(evolve_spectral(p, {opt.sign, t}), x));
          if (v > scan.sup_values[j]) {
            scan.sup_values[j] = v;
            scan.argmax_t[j] = t;
          }
        }
      }
    });
  }
  return scan;
}

CounterexampleResult counterexample_ratio(const CounterexampleSpec& spec, const CounterexampleParams& params) {
  if (params.n_x < 2) throw std::invalid_argument("counterexample needs n_x >= 2");
  const double band = std::exp2(spec.k);
  const SpectralProfile f = counterexample_profile(spec, band / params.band_cells);
  const double t_max = std::exp2(-3.0 * spec.k) / 100.0;
  const double half_width = 1.0 / band;
  const XGrid grid = XGrid::span(-half_width, half_width, static_cast<std::size_t>(params.n_x));

  MaximalScanOptions opt;
  opt.sign = params.sign;
  opt.n_t = params.n_t;
  opt.refine = params.refine;
  const MaximalScan scan = maximal_scan(f, t_max, grid, opt);

  SpaceField sup{grid, {}};
  sup.values.reserve(grid.count);
  for (double v : scan.sup_values) sup.values.emplace_back(v);

  CounterexampleResult r;
  r.k = spec.k;
  r.t_max = t_max;
  r.sup_l4 = lp_norm_space(sup, 4.0);
  r.hs = hs_norm(f, spec.s);
  r.ratio = r.sup_l4 / r.hs;
  return r;
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw std::invalid_argument("scaling_fit needs at least 3 points");
  ScalingFit fit;
  fit.points = points;
  const double n = static_cast<double>(points.size());
  double sk = 0.0, sy = 0.0;
  for (const auto& [k, r] : points) {
    if (!(r > 0.0)) throw std::invalid_argument("scaling_fit needs positive ratios");
    sk += k;
    sy += std::log2(r);
  }
  const double mk = sk / n, my = sy / n;
  double skk = 0.0, sky = 0.0;
  for (const auto& [k, r] : points) {
    skk += (k - mk) * (k - mk);
    sky += (k - mk) * (std::log2(r) - my);
  }
  if (skk == 0.0) throw std::invalid_argument("scaling_fit: all k equal");
  fit.slope = sky / skk;
  fit.intercept = my - fit.slope * mk;
  for (const auto& [k, r] : points)
    fit.residual = std::max(fit.residual, std::abs(std::log2(r) - (fit.intercept + fit.slope * k)));
  return fit;
}

std::vector<double> convergence_trace(const SpectralProfile& p, double x, const std::vector<double>& t_sequence,
                                      Branch sign) {
  for (std::size_t i = 0; i < t_sequence.size(); ++i) {
    if (!(t_sequence[i] >= 0.0)) throw std::invalid_argument("trace times must be >= 0");
    if (i > 0 && !(t_sequence[i] < t_sequence[i - 1]))
      throw std::invalid_argument("trace times must be strictly decreasing");
  }
  if (!t_sequence.empty()) {
    const ResolutionReport r = validate_resolution(p, {sign, t_sequence.front()});
    if (!r.ok) throw ResolutionError(r);
  }
  std::vector<double> out;
  out.reserve(t_sequence.size());
  for (double t : t_sequence) out.push_back(t == 0.0 ? 0.0 : std::abs(deviation_at(p, {sign, t}, x)));
  return out;
}

}  // namespace olab
