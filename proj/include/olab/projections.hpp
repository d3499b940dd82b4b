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

#ifndef OLAB_PROJECTIONS_HPP
#define OLAB_PROJECTIONS_HPP

#include <string>
#include <utility>
#include <vector>

#include "olab/spectral.hpp"

namespace olab {

/// Smooth dyadic cutoff: 1 on |xi| <= 1, 0 on |xi| >= 2, quintic smoothstep
/// in between (C^2 at both seams).
double dyadic_cutoff(double xi);

/// Unit-scale window max(0, 1 - |xi|). Its integer translates sum to one.
double wiener_window(double xi);

double low_multiplier(double xi, double N);
double band_multiplier(double xi, double N);
double high_multiplier(double xi, double N);

SpectralProfile project_low(const SpectralProfile& p, double N);
SpectralProfile project_band(const SpectralProfile& p, double N);
SpectralProfile project_high(const SpectralProfile& p, double N);

/// Splits a into (lo, hi) with lo ~= a * w, hi ~= a * (1 - w) and
/// lo + hi == a exactly in floating point. w must lie in [0, 1].
std::pair<double, double> split_exact(double a, double w);
std::pair<cplx, cplx> split_exact(cplx a, double w);

/// psi(D - k) applied on the grid. At a point xi between the integers
/// k0 = floor(xi) and k0 + 1 the two nonzero windows take the exact split of
/// the amplitude, so that summing all windows in k order returns p bit for bit.
SpectralProfile wiener_project(const SpectralProfile& p, int k);

struct WienerDecomposition {
  int k_min = 0;
  int k_max = -1;
  std::vector<SpectralProfile> pieces;  // pieces[i] belongs to k = k_min + i

  const SpectralProfile& piece(int k) const { return pieces.at(static_cast<std::size_t>(k - k_min)); }
  std::size_t count() const { return pieces.size(); }
  SpectralProfile reconstruct() const;
};

/// k range [floor(min support) - 1, ceil(max support) + 1]; a zero profile
/// yields an empty decomposition.
std::pair<int, int> wiener_range(const SpectralProfile& p);
WienerDecomposition wiener_decompose(const SpectralProfile& p);

/// Pointwise (sum_k |psi(D-k) f|^2)^{1/2} on the grid.
std::vector<double> square_function(const SpectralProfile& p, const XGrid& grid);

/// Writes one `xi,re,im` file per piece, named <stem>_k<k>.csv. Returns paths.
std::vector<std::string> export_decomposition(const WienerDecomposition& d, const std::string& stem);

}  // namespace olab

#endif  // OLAB_PROJECTIONS_HPP
