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

#include "olab/projections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "olab/io.hpp"

namespace olab {

namespace {

double smoothstep5(double u) { return u * u * u * (u * (6.0 * u - 15.0) + 10.0); }

SpectralProfile apply_multiplier(const SpectralProfile& p, auto&& m) {
  std::vector<cplx> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    if (p[j] != cplx{}) out[j] = p[j] * m(p.xi(j));
  return p.with_amplitudes(std::move(out));
}

void require_scale(double N) {
  if (!(N > 0.0) || !std::isfinite(N)) throw std::invalid_argument("projection scale N must be > 0");
}

}  // namespace

double dyadic_cutoff(double xi) {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - smoothstep5(a - 1.0);
}

double wiener_window(double xi) { return std::max(0.0, 1.0 - std::abs(xi)); }

double low_multiplier(double xi, double N) { return dyadic_cutoff(xi / N); }
double band_multiplier(double xi, double N) { return dyadic_cutoff(xi / N) - dyadic_cutoff(2.0 * xi / N); }
double high_multiplier(double xi, double N) { return 1.0 - dyadic_cutoff(xi / N); }

SpectralProfile project_low(const SpectralProfile& p, double N) {
  require_scale(N);
  return apply_multiplier(p, [N](double xi) { return low_multiplier(xi, N); });
}

SpectralProfile project_band(const SpectralProfile& p, double N) {
  require_scale(N);
  return apply_multiplier(p, [N](double xi) { return band_multiplier(xi, N); });
}

SpectralProfile project_high(const SpectralProfile& p, double N) {
  require_scale(N);
  return apply_multiplier(p, [N](double xi) { return high_multiplier(xi, N); });
}

std::pair<double, double> split_exact(double a, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("split weight outside [0, 1]");
  if (a == 0.0 || w == 0.0) return {0.0, a};
  if (w == 1.0) return {a, 0.0};
  const double mag = std::abs(a);
  double q = std::nextafter(mag, std::numeric_limits<double>::infinity()) - mag;
  if (!std::isfinite(q)) q = mag - std::nextafter(mag, 0.0);
  // lo is a multiple of the spacing of a and no larger than |a|, so a - lo
  // is representable and the subtraction below is exact.
  const double lo = std::nearbyint(a * w / q) * q;
  return {lo, a - lo};
}

std::pair<cplx, cplx> split_exact(cplx a, double w) {
  const auto [rl, rh] = split_exact(a.real(), w);
  const auto [il, ih] = split_exact(a.imag(), w);
  return {{rl, il}, {rh, ih}};
}

SpectralProfile wiener_project(const SpectralProfile& p, int k) {
  std::vector<cplx> out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == cplx{}) continue;
    const double xi = p.xi(j);
    const double k0 = std::floor(xi);
    const double kd = static_cast<double>(k);
    if (kd != k0 && kd != k0 + 1.0) continue;
    const auto [lo, hi] = split_exact(p[j], wiener_window(xi - k0));
    out[j] = kd == k0 ? lo : hi;
  }
  return p.with_amplitudes(std::move(out));
}

SpectralProfile WienerDecomposition::reconstruct() const {
  if (pieces.empty()) return {};
  std::vector<cplx> acc(pieces.front().size());
  for (const SpectralProfile& piece : pieces)
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += piece[j];
  return pieces.front().with_amplitudes(std::move(acc));
}

std::pair<int, int> wiener_range(const SpectralProfile& p) {
  if (p.is_zero()) return {0, -1};
  return {static_cast<int>(std::floor(p.support_min())) - 1,
          static_cast<int>(std::ceil(p.support_max())) + 1};
}

WienerDecomposition wiener_decompose(const SpectralProfile& p) {
  WienerDecomposition d;
  std::tie(d.k_min, d.k_max) = wiener_range(p);
  for (int k = d.k_min; k <= d.k_max; ++k) d.pieces.push_back(wiener_project(p, k));
  return d;
}

std::vector<double> square_function(const SpectralProfile& p, const XGrid& grid) {
  std::vector<double> acc(grid.count, 0.0);
  const WienerDecomposition d = wiener_decompose(p);
  for (const SpectralProfile& piece : d.pieces) {
    if (piece.is_zero()) continue;
    const SpaceField u = synthesize(piece, grid);
    for (std::size_t j = 0; j < grid.count; ++j) acc[j] += std::norm(u.values[j]);
  }
  for (double& v : acc) v = std::sqrt(v);
  return acc;
}

std::vector<std::string> export_decomposition(const WienerDecomposition& d, const std::string& stem) {
  std::vector<std::string> paths;
  for (int k = d.k_min; k <= d.k_max; ++k) {
    std::string path = stem + "_k" + std::to_string(k) + ".csv";
    write_profile_csv(d.piece(k), path);
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace olab
