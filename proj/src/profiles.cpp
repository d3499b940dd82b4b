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

#include "olab/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace olab {

SpectralProfile midpoint_profile(double lo, double hi, double xi_step, const std::function<cplx(double)>& fn,
                                 double zero_cut) {
  if (!(hi > lo) || !(xi_step > 0.0)) throw std::invalid_argument("midpoint_profile: bad interval");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / xi_step));
  std::vector<cplx> a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = fn(lo + (static_cast<double>(j) + 0.5) * xi_step);
  return SpectralProfile(lo + 0.5 * xi_step, xi_step, std::move(a), zero_cut);
}

double gaussian_bump(double xi, double centre, double sigma, double clip) {
  const double z = (xi - centre) / sigma;
  if (std::abs(z) > clip) return 0.0;
  return std::exp(-0.5 * z * z);
}

double band_indicator(double xi, double a, double b) { return xi >= a && xi <= b ? 1.0 : 0.0; }

SpectralProfile default_random_profile() {
  return midpoint_profile(
      -4.25, 4.25, 0x1p-9,
      [](double xi) { return cplx(gaussian_bump(std::abs(xi), 2.0, 0.25, 7.0)); }, 0.25);
}

}  // namespace olab
