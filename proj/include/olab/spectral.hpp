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

#ifndef OLAB_SPECTRAL_HPP
#define OLAB_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace olab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Default exclusion radius around the phase singularity at xi = 0.
inline constexpr double kDefaultZeroCut = 0x1p-20;

// Per-cell phase increment above which a grid is considered unresolved.
inline constexpr double kMaxPhaseIncrement = 0.1;

/// Selects the branch of the dispersion relation xi^3 +/- 1/xi.
enum class Branch { plus, minus };

Branch parse_branch(const std::string& s);
const char* to_string(Branch b);

/// Fourier data sampled on the uniform grid xi_j = xi_min + j * xi_step.
///
/// Amplitudes at |xi_j| < zero_cut are forced to zero on construction; the
/// l1 mass removed that way is kept in truncated_mass().
class SpectralProfile {
 public:
  SpectralProfile() = default;
  SpectralProfile(double xi_min, double xi_step, std::vector<cplx> amplitudes,
                  double zero_cut = kDefaultZeroCut);

  /// Samples fn on n grid points.
  template <typename Fn>
  static SpectralProfile sample(double xi_min, double xi_step, std::size_t n, Fn&& fn,
                                double zero_cut = kDefaultZeroCut) {
    std::vector<cplx> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = cplx(fn(xi_min + static_cast<double>(j) * xi_step));
    return SpectralProfile(xi_min, xi_step, std::move(a), zero_cut);
  }

  double xi_min() const { return xi_min_; }
  double xi_step() const { return xi_step_; }
  double zero_cut() const { return zero_cut_; }
  double truncated_mass() const { return truncated_mass_; }
  std::size_t size() const { return amplitudes_.size(); }
  bool empty() const { return amplitudes_.empty(); }

  double xi(std::size_t j) const { return xi_min_ + static_cast<double>(j) * xi_step_; }
  double xi_max() const { return empty() ? xi_min_ : xi(size() - 1); }
  const cplx& operator[](std::size_t j) const { return amplitudes_[j]; }
  std::span<const cplx> amplitudes() const { return amplitudes_; }

  /// Same grid and cut, new amplitudes. Points inside the cut stay zero.
  SpectralProfile with_amplitudes(std::vector<cplx> amplitudes) const;

  /// Index of the grid point closest to xi (clamped to the grid).
  std::size_t nearest_index(double xi) const;

  bool is_zero() const;
  /// Smallest and largest xi carrying a nonzero amplitude. Requires !is_zero().
  double support_min() const;
  double support_max() const;

 private:
  double xi_min_ = 0.0;
  double xi_step_ = 1.0;
  double zero_cut_ = kDefaultZeroCut;
  double truncated_mass_ = 0.0;
  std::vector<cplx> amplitudes_;
};

/// Uniform spatial grid x_j = x_min + j * x_step, j < count.
struct XGrid {
  double x_min = 0.0;
  double x_step = 1.0;
  std::size_t count = 0;

  double x(std::size_t j) const { return x_min + static_cast<double>(j) * x_step; }
  double x_max() const { return count == 0 ? x_min : x(count - 1); }

  /// count points from lo to hi inclusive.
  static XGrid span(double lo, double hi, std::size_t count);
};

struct SpaceField {
  XGrid grid;
  std::vector<cplx> values;
};

struct PropagatorConfig {
  Branch sign = Branch::plus;
  // Extended precision so that composed evolutions t1 + t2 stay consistent.
  long double t = 0.0L;
};

struct ResolutionReport {
  double max_phase_increment = 0.0;
  double truncated_mass = 0.0;
  bool ok = true;
};

class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const ResolutionReport& r);
  const ResolutionReport& report() const { return report_; }

 private:
  ResolutionReport report_;
};

/// xi^3 + 1/xi (plus) or xi^3 - 1/xi (minus). Throws std::domain_error at 0.
double phase(double xi, Branch sign);
/// 3 xi^2 -/+ 1/xi^2.
double phase_derivative(double xi, Branch sign);

SpectralProfile evolve_spectral(const SpectralProfile& p, const PropagatorConfig& cfg);

/// Trapezoid synthesis (1/sqrt(2 pi)) sum_m e^{i x xi_m} w_m f(xi_m) dxi.
SpaceField synthesize(const SpectralProfile& p, const XGrid& grid);
cplx synthesize_at(const SpectralProfile& p, double x);

SpaceField propagate(const SpectralProfile& p, const PropagatorConfig& cfg, const XGrid& grid);
cplx propagate_at(const SpectralProfile& p, const PropagatorConfig& cfg, double x);

/// U(t)f - f evaluated without cancellation: the multiplier e^{i t phase} - 1
/// is formed as 2i sin(t phase / 2) e^{i t phase / 2}. Requires resolution.
SpaceField deviation(const SpectralProfile& p, const PropagatorConfig& cfg, const XGrid& grid);
cplx deviation_at(const SpectralProfile& p, const PropagatorConfig& cfg, double x);

/// Same as deviation() but without the resolution gate; callers that have
/// already validated a larger time use this.
SpaceField deviation_unchecked(const SpectralProfile& p, const PropagatorConfig& cfg,
                               const XGrid& grid);

double hs_norm(const SpectralProfile& p, double s);
inline double l2_norm(const SpectralProfile& p) { return hs_norm(p, 0.0); }
/// sum |f(xi_j)| dxi
double l1_mass(const SpectralProfile& p);

/// Trapezoid L^p norm of the samples; p = infinity gives max |u|.
double lp_norm_space(const SpaceField& u, double p);

ResolutionReport validate_resolution(const SpectralProfile& p, const PropagatorConfig& cfg);

/// Closed grid spanning one full period 2 pi / xi_step of the synthesis with
/// enough points that the discrete Parseval identity is exact.
XGrid plancherel_grid(const SpectralProfile& p);

// Worker-thread cap used by the grid loops; 0 or 1 runs inline.
void set_thread_count(unsigned n);
unsigned thread_count();

}  // namespace olab

#endif  // OLAB_SPECTRAL_HPP
