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

#include "olab/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include "parallel.hpp"

namespace olab {

namespace {

std::atomic<unsigned> g_threads{1};

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

// Length of a run of consecutive synthesis terms advanced by a complex
// rotation before re-anchoring with an exact sincos.
constexpr std::size_t kRecurrenceBlock = 32;

long double phase_ld(double xi, Branch sign) {
  const long double x = xi;
  const long double inv = 1.0L / x;
  return sign == Branch::plus ? x * x * x + inv : x * x * x - inv;
}

// t * phase(xi) reduced to [-pi, pi].
long double reduced_angle(double xi, const PropagatorConfig& cfg) {
  return std::remainder(cfg.t * phase_ld(xi, cfg.sign), kTwoPiL);
}

cplx unit(long double angle) {
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

struct Run {
  std::size_t begin;
  std::size_t end;
};

// Maximal runs of consecutive nonzero amplitudes.
std::vector<Run> nonzero_runs(std::span<const cplx> a) {
  std::vector<Run> runs;
  std::size_t j = 0;
  while (j < a.size()) {
    while (j < a.size() && a[j] == cplx{}) ++j;
    if (j == a.size()) break;
    const std::size_t b = j;
    while (j < a.size() && a[j] != cplx{}) ++j;
    runs.push_back({b, j});
  }
  return runs;
}

// Weighted amplitudes w_j f_j dxi with the trapezoid halving at both ends.
std::vector<cplx> quadrature_weights(const SpectralProfile& p) {
  std::vector<cplx> w(p.amplitudes().begin(), p.amplitudes().end());
  const double h = p.xi_step();
  for (auto& v : w) v *= h;
  if (!w.empty()) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

cplx sum_at(const SpectralProfile& p, std::span<const cplx> weighted,
            const std::vector<Run>& runs, double x) {
  cplx acc{};
  const cplx step = std::polar(1.0, x * p.xi_step());
  for (const Run& r : runs) {
    for (std::size_t b = r.begin; b < r.end; b += kRecurrenceBlock) {
      const std::size_t e = std::min(r.end, b + kRecurrenceBlock);
      cplx rot = std::polar(1.0, x * p.xi(b));
      for (std::size_t m = b; m < e; ++m) {
        acc += rot * weighted[m];
        rot *= step;
      }
    }
  }
  return acc * kInvSqrt2Pi;
}

void require_resolved(const SpectralProfile& p, const PropagatorConfig& cfg) {
  const ResolutionReport r = validate_resolution(p, cfg);
  if (!r.ok) throw ResolutionError(r);
}

SpectralProfile deviation_profile(const SpectralProfile& p, const PropagatorConfig& cfg) {
  std::vector<cplx> out(p.size());
  if (cfg.t != 0.0L) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] == cplx{}) continue;
      const long double half = 0.5L * reduced_angle(p.xi(j), cfg);
      const double s = static_cast<double>(std::sin(half));
      out[j] = cplx(0.0, 2.0 * s) * unit(half) * p[j];
    }
  }
  return p.with_amplitudes(std::move(out));
}

}  // namespace

Branch parse_branch(const std::string& s) {
  if (s == "+" || s == "plus") return Branch::plus;
  if (s == "-" || s == "minus") return Branch::minus;
  throw std::invalid_argument("sign must be '+' or '-', got '" + s + "'");
}

const char* to_string(Branch b) { return b == Branch::plus ? "+" : "-"; }

SpectralProfile::SpectralProfile(double xi_min, double xi_step, std::vector<cplx> amplitudes,
                                 double zero_cut)
    : xi_min_(xi_min), xi_step_(xi_step), zero_cut_(zero_cut), amplitudes_(std::move(amplitudes)) {
  if (!(xi_step > 0.0) || !std::isfinite(xi_step) || !std::isfinite(xi_min))
    throw std::invalid_argument("spectral grid needs finite xi_min and xi_step > 0");
  if (!(zero_cut >= 0.0) || !std::isfinite(zero_cut))
    throw std::invalid_argument("zero_cut must be finite and >= 0");
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) {
    cplx& a = amplitudes_[j];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("non-finite amplitude at index " + std::to_string(j));
    const double x = xi(j);
    if (std::abs(x) < zero_cut_ || x == 0.0) {
      truncated_mass_ += std::abs(a) * xi_step_;
      a = cplx{};
    }
  }
}

SpectralProfile SpectralProfile::with_amplitudes(std::vector<cplx> amplitudes) const {
  if (amplitudes.size() != size())
    throw std::invalid_argument("with_amplitudes: size mismatch");
  SpectralProfile out(xi_min_, xi_step_, std::move(amplitudes), zero_cut_);
  out.truncated_mass_ = truncated_mass_;
  return out;
}

std::size_t SpectralProfile::nearest_index(double x) const {
  if (empty()) throw std::logic_error("nearest_index on empty profile");
  const double j = std::round((x - xi_min_) / xi_step_);
  if (j <= 0.0) return 0;
  return std::min(size() - 1, static_cast<std::size_t>(j));
}

bool SpectralProfile::is_zero() const {
  return std::all_of(amplitudes_.begin(), amplitudes_.end(), [](cplx a) { return a == cplx{}; });
}

double SpectralProfile::support_min() const {
  for (std::size_t j = 0; j < size(); ++j)
    if (amplitudes_[j] != cplx{}) return xi(j);
  throw std::logic_error("support_min of a zero profile");
}

double SpectralProfile::support_max() const {
  for (std::size_t j = size(); j-- > 0;)
    if (amplitudes_[j] != cplx{}) return xi(j);
  throw std::logic_error("support_max of a zero profile");
}

XGrid XGrid::span(double lo, double hi, std::size_t count) {
  if (count == 0) throw std::invalid_argument("XGrid::span needs count >= 1");
  if (count == 1) return {lo, 1.0, 1};
  if (!(hi > lo)) throw std::invalid_argument("XGrid::span needs hi > lo");
  return {lo, (hi - lo) / static_cast<double>(count - 1), count};
}

ResolutionError::ResolutionError(const ResolutionReport& r)
    : std::runtime_error([&r] {
        std::ostringstream os;
        os << "unresolved phase: max increment " << r.max_phase_increment << " > "
           << kMaxPhaseIncrement << " rad per cell";
        return os.str();
      }()),
      report_(r) {}

double phase(double xi, Branch sign) {
  if (xi == 0.0) throw std::domain_error("phase is singular at xi = 0");
  const double xi3 = xi * xi * xi;
  return sign == Branch::plus ? xi3 + 1.0 / xi : xi3 - 1.0 / xi;
}

double phase_derivative(double xi, Branch sign) {
  if (xi == 0.0) throw std::domain_error("phase is singular at xi = 0");
  const double inv2 = 1.0 / (xi * xi);
  return sign == Branch::plus ? 3.0 * xi * xi - inv2 : 3.0 * xi * xi + inv2;
}

SpectralProfile evolve_spectral(const SpectralProfile& p, const PropagatorConfig& cfg) {
  if (cfg.t == 0.0L) return p;
  std::vector<cplx> out(p.amplitudes().begin(), p.amplitudes().end());
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (out[j] == cplx{}) continue;
    out[j] *= unit(reduced_angle(p.xi(j), cfg));
  }
  return p.with_amplitudes(std::move(out));
}

SpaceField synthesize(const SpectralProfile& p, const XGrid& grid) {
  SpaceField u{grid, std::vector<cplx>(grid.count)};
  const std::vector<cplx> w = quadrature_weights(p);
  const std::vector<Run> runs = nonzero_runs(w);
  detail::parallel_for(grid.count, [&](std::size_t b, std::size_t e) {
    for (std::size_t j = b; j < e; ++j) u.values[j] = sum_at(p, w, runs, grid.x(j));
  });
  return u;
}

cplx synthesize_at(const SpectralProfile& p, double x) {
  const std::vector<cplx> w = quadrature_weights(p);
  return sum_at(p, w, nonzero_runs(w), x);
}

SpaceField propagate(const SpectralProfile& p, const PropagatorConfig& cfg, const XGrid& grid) {
  require_resolved(p, cfg);
  return synthesize(evolve_spectral(p, cfg), grid);
}

cplx propagate_at(const SpectralProfile& p, const PropagatorConfig& cfg, double x) {
  require_resolved(p, cfg);
  return synthesize_at(evolve_spectral(p, cfg), x);
}

SpaceField deviation(const SpectralProfile& p, const PropagatorConfig& cfg, const XGrid& grid) {
  require_resolved(p, cfg);
  return deviation_unchecked(p, cfg, grid);
}

SpaceField deviation_unchecked(const SpectralProfile& p, const PropagatorConfig& cfg,
                               const XGrid& grid) {
  return synthesize(deviation_profile(p, cfg), grid);
}

cplx deviation_at(const SpectralProfile& p, const PropagatorConfig& cfg, double x) {
  require_resolved(p, cfg);
  return synthesize_at(deviation_profile(p, cfg), x);
}

double hs_norm(const SpectralProfile& p, double s) {
  double acc = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == cplx{}) continue;
    const double x = p.xi(j);
    const double weight = s == 0.0 ? 1.0 : std::pow(1.0 + x * x, s);
    acc += weight * std::norm(p[j]);
  }
  return std::sqrt(acc * p.xi_step());
}

double l1_mass(const SpectralProfile& p) {
  double acc = 0.0;
  for (const cplx& a : p.amplitudes()) acc += std::abs(a);
  return acc * p.xi_step();
}

double lp_norm_space(const SpaceField& u, double p) {
  if (!(p >= 1.0)) throw std::domain_error("lp_norm_space needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : u.values) m = std::max(m, std::abs(v));
    return m;
  }
  const std::size_t n = u.values.size();
  if (n < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = (j == 0 || j + 1 == n) ? 0.5 : 1.0;
    acc += w * std::pow(std::abs(u.values[j]), p);
  }
  return std::pow(acc * u.grid.x_step, 1.0 / p);
}

ResolutionReport validate_resolution(const SpectralProfile& p, const PropagatorConfig& cfg) {
  ResolutionReport r;
  r.truncated_mass = p.truncated_mass();
  const double t = std::abs(static_cast<double>(cfg.t));
  if (t != 0.0) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] == cplx{}) continue;
      const double inc = t * std::abs(phase_derivative(p.xi(j), cfg.sign)) * p.xi_step();
      r.max_phase_increment = std::max(r.max_phase_increment, inc);
    }
  }
  r.ok = r.max_phase_increment <= kMaxPhaseIncrement;
  return r;
}

XGrid plancherel_grid(const SpectralProfile& p) {
  std::size_t first = p.size(), last = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == cplx{}) continue;
    first = std::min(first, j);
    last = j;
  }
  const std::size_t span = first > last ? 0 : last - first;
  const std::size_t n = span + 1;
  const double period = 2.0 * kPi / p.xi_step();
  return {-0.5 * period, period / static_cast<double>(n), n + 1};
}

void set_thread_count(unsigned n) { g_threads = std::max(1u, n); }
unsigned thread_count() { return g_threads; }

}  // namespace olab
