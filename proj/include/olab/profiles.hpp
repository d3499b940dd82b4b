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

#ifndef OLAB_PROFILES_HPP
#define OLAB_PROFILES_HPP

#include <functional>

#include "olab/spectral.hpp"

namespace olab {

/// Samples fn at the midpoints of the cells of [lo, hi] (width xi_step).
/// With lo and hi multiples of xi_step, xi = 0 is never a sample point.
SpectralProfile midpoint_profile(double lo, double hi, double xi_step, const std::function<cplx(double)>& fn,
                                 double zero_cut = kDefaultZeroCut);

/// exp(-(xi - centre)^2 / (2 sigma^2)) cut to zero beyond clip * sigma.
double gaussian_bump(double xi, double centre, double sigma, double clip = 8.0);

/// 1 on [a, b], 0 elsewhere.
double band_indicator(double xi, double a, double b);

/// Even Gaussian bumps at +/-2 (sigma 1/4) on a grid resolved up to |t| = 1;
/// the profile used by the stochastic-continuity and tail experiments.
SpectralProfile default_random_profile();

}  // namespace olab

#endif  // OLAB_PROFILES_HPP
