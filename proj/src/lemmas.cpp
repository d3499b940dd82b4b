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

#include "olab/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "olab/io.hpp"
#include "olab/profiles.hpp"
#include "olab/projections.hpp"

namespace olab {

namespace {

constexpr double kLowN = 8.0;
constexpr double kHighN = 8.0;
constexpr int kWienerMaxK = 8;

double end_weight(const SpectralProfile& p, std::size_t j) {
  return (j == 0 || j + 1 == p.size()) ? 0.5 : 1.0;
}

// (1/sqrt(2 pi)) [2 sum_{|xi| <= delta} |q| dxi + |t| sum_{|xi| > delta} |phase| |q| dxi]:
// the triangle-inequality majorant of sup_x |U(t)q - q| on the grid.
double split_majorant(const SpectralProfile& q, double t, double delta, Branch sign) {
  double near = 0.0;
  double far = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double a = std::abs(q[j]) * end_weight(q, j);
    if (a == 0.0) continue;
    const double xi = q.xi(j);
    if (std::abs(xi) <= delta) {
      near += a;
    } else {
      far += std::abs(phase(xi, sign)) * a;
    }
  }
  return kInvSqrt2Pi * q.xi_step() * (2.0 * near + std::abs(t) * far);
}

XGrid window_grid(const SpectralProfile& p, double t, const LemmaConfig& cfg) {
  const SupportWindow w = support_window(p, t, cfg.sign, cfg.margin);
  return XGrid::span(w.lo, w.hi, cfg.n_x);
}

double sup_deviation(const SpectralProfile& q, double t, const LemmaConfig& cfg) {
  if (q.is_zero()) return 0.0;
  const SpaceField d = deviation(q, {cfg.sign, static_cast<long double>(t)}, window_grid(q, t, cfg));
  return lp_norm_space(d, std::numeric_limits<double>::infinity());
}

bool selected(const LemmaConfig& cfg, LemmaId id) {
  return cfg.only.empty() || std::find(cfg.only.begin(), cfg.only.end(), id) != cfg.only.end();
}

LemmaReport finish(LemmaReport r) {
  r.pass = r.recompute_pass();
  return r;
}

LemmaReport low_report(LemmaId id, const SpectralProfile& q, double t, double eps, double delta, double lhs,
                       const LemmaConfig& cfg, double p_norm) {
  LemmaReport r;
  r.id = id;
  r.params = {{"t", t}, {"eps", eps}, {"delta", delta}};
  r.measured_lhs = lhs;
  r.bound_rhs = split_majorant(q, t, delta, cfg.sign);
  if (id == LemmaId::L2_2) {
    const double excess = std::max(0.0, lhs - eps);
    const double denom = std::abs(t) * p_norm;
    r.fitted_c = excess == 0.0 ? 0.0 : (denom > 0.0 ? excess * delta / denom : std::numeric_limits<double>::infinity());
  } else {
    r.fitted_c = lhs / (eps + std::abs(t) / eps);
  }
  if (cfg.c_max) r.params.emplace_back("c_max", *cfg.c_max);
  return finish(std::move(r));
}

LemmaReport skip_report(LemmaId id, const std::string& profile_id, const std::string& why) {
  LemmaReport r;
  r.id = id;
  r.profile_id = profile_id;
  r.skipped = true;
  r.pass = false;
  r.note = why;
  return r;
}

}  // namespace

const char* to_string(LemmaId id) {
  switch (id) {
    case LemmaId::L2_2: return "L2_2";
    case LemmaId::L2_3: return "L2_3";
    case LemmaId::L2_4: return "L2_4";
    case LemmaId::L2_5: return "L2_5";
    case LemmaId::L2_6: return "L2_6";
    case LemmaId::L2_7: return "L2_7";
    case LemmaId::NORM_EQUIV: return "NORM_EQUIV";
    case LemmaId::BERNSTEIN: return "BERNSTEIN";
  }
  return "?";
}

const std::vector<LemmaId>& all_lemma_ids() {
  static const std::vector<LemmaId> ids = {LemmaId::L2_2, LemmaId::L2_3, LemmaId::L2_4, LemmaId::L2_5,
                                           LemmaId::L2_6, LemmaId::L2_7, LemmaId::NORM_EQUIV, LemmaId::BERNSTEIN};
  return ids;
}

LemmaId parse_lemma_id(const std::string& s) {
  for (LemmaId id : all_lemma_ids()) {
    if (s == to_string(id)) return id;
  }
  throw std::invalid_argument("unknown lemma id: " + s);
}

std::optional<double> LemmaReport::param(const std::string& name) const {
  for (const auto& [k, v] : params) {
    if (k == name) return v;
  }
  return std::nullopt;
}

std::string LemmaReport::params_string() const {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + "=" + format_double(v);
  }
  return out;
}

bool LemmaReport::recompute_pass() const {
  if (skipped) return false;
  if (!std::isfinite(measured_lhs) || !std::isfinite(bound_rhs)) return false;
  bool ok = measured_lhs <= bound_rhs * (1.0 + rel_tol) + abs_tol;
  if (id == LemmaId::NORM_EQUIV) {
    // Lower side: the pieces never carry more than the whole.
    const double sum = param("sum_pieces").value_or(0.0);
    ok = ok && sum <= measured_lhs * (1.0 + rel_tol) + abs_tol;
  }
  if (slope_window) {
    const double slope = param("slope").value_or(std::numeric_limits<double>::quiet_NaN());
    ok = ok && slope >= slope_window->first && slope <= slope_window->second;
  }
  if (const auto cap = param("c_max")) ok = ok && fitted_c <= *cap;
  return ok;
}

std::vector<CorpusProfile> default_corpus() {
  using std::abs;
  std::vector<CorpusProfile> out;
  auto add = [&](std::string id, SpectralProfile p) { out.push_back({std::move(id), std::move(p)}); };

  add("gauss_sym_c2", default_random_profile());
  add("gauss_pos_c3", midpoint_profile(0.0, 6.0, 0x1p-10, [](double xi) {
        return std::polar(gaussian_bump(xi, 3.0, 0.3), kPi / 3.0);
      }));
  add("gauss_neg_c4", midpoint_profile(-6.0, -2.0, 0x1p-10, [](double xi) {
        return cplx(gaussian_bump(xi, -4.0, 0.2));
      }));
  add("gauss_pos_c9", midpoint_profile(7.0, 11.0, 0x1p-12, [](double xi) {
        return cplx(gaussian_bump(xi, 9.0, 0.2));
      }));
  add("gauss_wide_c0_cut", midpoint_profile(
                               -6.5, 6.5, 0x1p-11, [](double xi) { return cplx(gaussian_bump(xi, 0.0, 1.0, 6.0)); },
                               0.125));
  add("band_pos_1_2", midpoint_profile(0.5, 2.5, 0x1p-7, [](double xi) { return cplx(band_indicator(xi, 1.0, 2.0)); }));
  add("band_sym_2_3", midpoint_profile(-3.5, 3.5, 0x1p-9, [](double xi) {
        return cplx(band_indicator(abs(xi), 2.0, 3.0));
      }));
  add("band_pos_8p5_10", midpoint_profile(8.0, 10.5, 0x1p-12, [](double xi) {
        return cplx(band_indicator(xi, 8.5, 10.0));
      }));
  add("band_neg_5_4", midpoint_profile(-5.5, -3.5, 0x1p-10, [](double xi) {
        return cplx(band_indicator(xi, -5.0, -4.0));
      }));
  add("mix_g1_band9", midpoint_profile(0.0, 10.0, 0x1p-12, [](double xi) {
        return cplx(gaussian_bump(xi, 1.0, 0.1) + 0.5 * band_indicator(xi, 8.5, 9.5));
      }));
  add("mix_g2_g5", midpoint_profile(0.0, 8.0, 0x1p-11, [](double xi) {
        return cplx(gaussian_bump(xi, 2.0, 0.2) + 0.5 * gaussian_bump(xi, 5.0, 0.3));
      }));
  add("mix_two_scale_sym", midpoint_profile(-6.0, 6.0, 0x1p-10, [](double xi) {
        const double a = abs(xi);
        return cplx(gaussian_bump(a, 3.0, 0.4, 6.0) + 2.0 * gaussian_bump(a, 3.0, 0.05));
      }));
  return out;
}

std::vector<CorpusProfile> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("corpus directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<CorpusProfile> out;
  for (const auto& f : files) {
    try {
      out.push_back({f.stem().string(), read_profile_csv(f.string())});
    } catch (const std::exception& e) {
      throw std::runtime_error(f.string() + ": " + e.what());
    }
  }
  return out;
}

SupportWindow support_window(const SpectralProfile& p, double t, Branch sign, double margin) {
  if (p.is_zero()) return {-1.0, 1.0, 0.0};
  std::size_t nonzero = 0;
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = -dmin;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == cplx(0.0)) continue;
    ++nonzero;
    const double d = phase_derivative(p.xi(j), sign);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  const double measure = static_cast<double>(nonzero) * p.xi_step();
  const double half_period = kPi / p.xi_step();
  const double w = std::min(64.0 * kPi / measure, half_period);
  // Stationary phase: frequency xi sits near x = -t phase'(xi).
  const double a = -t * dmin;
  const double b = -t * dmax;
  const double lo = -w + std::min(a, b);
  const double hi = w + std::max(a, b);
  const double extra = 0.5 * margin * (hi - lo);
  return {lo - extra, hi + extra, 2.0 * extra};
}

double delta_epsilon(const SpectralProfile& p, double eps) {
  // Distinct |xi| <= 1/2 in increasing order with cumulative mass.
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double a = std::abs(p.xi(j));
    if (a <= 0.5) pts.emplace_back(a, std::norm(p[j]) * p.xi_step());
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> mags;
  std::vector<double> cum;
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    acc += pts[i].second;
    if (i + 1 < pts.size() && pts[i + 1].first == pts[i].first) continue;
    mags.push_back(pts[i].first);
    cum.push_back(acc);
  }
  const double eps2 = eps * eps;
  if (cum.empty() || cum.back() <= eps2) return 0.5;
  // Largest i with cum[i] <= eps^2 (cum is nondecreasing).
  const auto it = std::upper_bound(cum.begin(), cum.end(), eps2);
  if (it == cum.begin()) return 0.5 * mags.front();
  return mags[static_cast<std::size_t>(it - cum.begin()) - 1];
}

LemmaReport check_low_frequency(const SpectralProfile& p, double t, double eps, const LemmaConfig& cfg,
                                bool delta_is_eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const SpectralProfile q = project_low(p, kLowN);
  const double delta = delta_is_eps ? eps : delta_epsilon(p, eps);
  const double lhs = sup_deviation(q, t, cfg);
  return low_report(delta_is_eps ? LemmaId::L2_4 : LemmaId::L2_2, q, t, eps, delta, lhs, cfg, l2_norm(p));
}

std::vector<double> default_high_times() {
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(std::pow(10.0, -6.0 + 0.25 * i));
  return ts;
}

LemmaReport check_high_frequency(const SpectralProfile& p, const LemmaConfig& cfg) {
  const SpectralProfile q = project_high(p, kHighN);
  if (q.is_zero()) return skip_report(LemmaId::L2_3, "", "no frequency content above 8");
  std::vector<double> ts = cfg.high_t.empty() ? default_high_times() : cfg.high_t;
  std::sort(ts.begin(), ts.end());
  if (ts.size() < 2 || ts.front() <= 0.0) throw std::invalid_argument("high-frequency times must be positive");
  const ResolutionReport res = validate_resolution(q, {cfg.sign, static_cast<long double>(ts.back())});
  if (!res.ok) throw ResolutionError(res);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double c = 0.0;
  for (double t : ts) {
    const double d = sup_deviation(q, t, cfg);
    if (!(d > 0.0)) throw std::runtime_error("vanishing deviation");
    const double lx = std::log(t);
    const double ly = std::log(d);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    c = std::max(c, d / t);
  }
  const double n = static_cast<double>(ts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  double majorant = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] == cplx(0.0)) continue;
    majorant += std::abs(phase(q.xi(j), cfg.sign)) * std::abs(q[j]);
  }
  majorant *= q.xi_step();

  LemmaReport r;
  r.id = LemmaId::L2_3;
  r.params = {{"t_min", ts.front()}, {"t_max", ts.back()}, {"n_t", n}, {"slope", slope}};
  r.measured_lhs = c;
  r.bound_rhs = majorant;
  r.fitted_c = c;
  r.slope_window = cfg.slope_window;
  return finish(std::move(r));
}

LemmaReport check_wiener_low(const SpectralProfile& p, double t, double eps, int k, const LemmaConfig& cfg) {
  if (std::abs(k) > kWienerMaxK) throw std::out_of_range("Wiener index outside [-8, 8]");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const SpectralProfile q = wiener_project(p, k);
  const double lhs = sup_deviation(q, t, cfg);
  LemmaReport r;
  r.id = LemmaId::L2_5;
  r.params = {{"t", t}, {"eps", eps}, {"k", static_cast<double>(k)}};
  r.measured_lhs = lhs;
  r.bound_rhs = split_majorant(q, t, eps, cfg.sign);
  r.fitted_c = lhs / (eps + std::abs(t) / eps);
  if (cfg.c_max) r.params.emplace_back("c_max", *cfg.c_max);
  return finish(std::move(r));
}

LemmaReport check_square_function(const SpectralProfile& p, std::optional<double> t, const LemmaConfig& cfg) {
  const double tv = t.value_or(0.0);
  SpectralProfile q = p;
  if (t && tv != 0.0) {
    const PropagatorConfig pc{cfg.sign, static_cast<long double>(tv)};
    const ResolutionReport res = validate_resolution(p, pc);
    if (!res.ok) throw ResolutionError(res);
    q = evolve_spectral(p, pc);
  }
  double lhs = 0.0;
  if (!p.is_zero()) {
    const std::vector<double> s = square_function(q, window_grid(p, tv, cfg));
    for (double v : s) lhs = std::max(lhs, v);
  }
  LemmaReport r;
  r.id = t ? LemmaId::L2_7 : LemmaId::L2_6;
  if (t) r.params = {{"t", tv}};
  r.measured_lhs = lhs;
  r.bound_rhs = l2_norm(p);
  r.fitted_c = r.bound_rhs > 0.0 ? lhs / r.bound_rhs : 0.0;
  r.rel_tol = cfg.square_tol;
  return finish(std::move(r));
}

LemmaReport check_norm_equivalence(const SpectralProfile& p) {
  const WienerDecomposition d = wiener_decompose(p);
  double sum = 0.0;
  for (const auto& piece : d.pieces) {
    const double n = l2_norm(piece);
    sum += n * n;
  }
  const double whole = l2_norm(p);
  LemmaReport r;
  r.id = LemmaId::NORM_EQUIV;
  r.params = {{"sum_pieces", sum}};
  r.measured_lhs = whole * whole;
  r.bound_rhs = 3.0 * sum;
  r.fitted_c = sum > 0.0 ? r.measured_lhs / sum : 0.0;
  r.rel_tol = 1e-12;
  r.abs_tol = 0.0;
  return finish(std::move(r));
}

std::vector<LemmaReport> check_bernstein(const SpectralProfile& p, const LemmaConfig& cfg) {
  const WienerDecomposition d = wiener_decompose(p);
  double r24 = 0.0, r2i = 0.0, r4i = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = d.k_min; k <= d.k_max; ++k) {
    const SpectralProfile& piece = d.piece(k);
    if (piece.is_zero()) continue;
    const SpaceField u = synthesize(piece, window_grid(piece, 0.0, cfg));
    const double l2 = l2_norm(piece);
    const double l4 = lp_norm_space(u, 4.0);
    const double li = lp_norm_space(u, inf);
    r24 = std::max(r24, l4 / l2);
    r2i = std::max(r2i, li / l2);
    if (l4 > 0.0) r4i = std::max(r4i, li / l4);
  }
  auto make = [&](double lo, double hi, double measured, double bound) {
    LemmaReport r;
    r.id = LemmaId::BERNSTEIN;
    r.params = {{"p", lo}, {"q", hi}};
    r.measured_lhs = measured;
    r.bound_rhs = bound;
    r.fitted_c = measured;
    return finish(std::move(r));
  };
  return {make(2.0, 4.0, r24, std::pow(kPi, -0.25)), make(2.0, inf, r2i, 1.0 / std::sqrt(kPi)),
          make(4.0, inf, r4i, cfg.bernstein_c)};
}

std::vector<LemmaReport> run_corpus(const std::vector<CorpusProfile>& corpus, const LemmaConfig& cfg) {
  std::vector<LemmaReport> out;
  for (const auto& [id, p] : corpus) {
    auto guarded = [&](LemmaId lid, auto&& fn) {
      if (!selected(cfg, lid)) return;
      try {
        for (LemmaReport r : fn()) {
          r.profile_id = id;
          out.push_back(std::move(r));
        }
      } catch (const std::exception& e) {
        out.push_back(skip_report(lid, id, e.what()));
      }
    };
    using Reports = std::vector<LemmaReport>;
    guarded(LemmaId::NORM_EQUIV, [&] { return Reports{check_norm_equivalence(p)}; });
    guarded(LemmaId::BERNSTEIN, [&] { return check_bernstein(p, cfg); });
    guarded(LemmaId::L2_6, [&] { return Reports{check_square_function(p, std::nullopt, cfg)}; });
    for (double t : cfg.square_t) {
      guarded(LemmaId::L2_7, [&] { return Reports{check_square_function(p, t, cfg)}; });
    }
    // One sup computation per t serves every eps of both low-frequency checks.
    const SpectralProfile q = project_low(p, kLowN);
    const double norm = l2_norm(p);
    std::vector<std::optional<double>> lhs_cache(cfg.low_t.size());
    for (LemmaId lid : {LemmaId::L2_2, LemmaId::L2_4}) {
      for (std::size_t i = 0; i < cfg.low_t.size(); ++i) {
        const double t = cfg.low_t[i];
        guarded(lid, [&] {
          if (!lhs_cache[i]) lhs_cache[i] = sup_deviation(q, t, cfg);
          const double lhs = *lhs_cache[i];
          Reports rs;
          for (double eps : cfg.low_eps) {
            const double delta = lid == LemmaId::L2_4 ? eps : delta_epsilon(p, eps);
            rs.push_back(low_report(lid, q, t, eps, delta, lhs, cfg, norm));
          }
          return rs;
        });
      }
    }
    guarded(LemmaId::L2_3, [&] { return Reports{check_high_frequency(p, cfg)}; });
    if (selected(cfg, LemmaId::L2_5) && !p.is_zero()) {
      const auto [k0, k1] = wiener_range(p);
      for (int k = std::max(k0, -kWienerMaxK); k <= std::min(k1, kWienerMaxK); ++k) {
        guarded(LemmaId::L2_5, [&] { return Reports{check_wiener_low(p, cfg.wiener_t, cfg.wiener_eps, k, cfg)}; });
      }
    }
  }
  return out;
}

CorpusSummary summarize(const std::vector<LemmaReport>& reports) {
  CorpusSummary s;
  for (const auto& r : reports) {
    ++s.total;
    if (r.skipped) {
      ++s.skipped;
    } else if (r.pass) {
      ++s.passed;
    } else {
      ++s.failed;
    }
  }
  return s;
}

}  // namespace olab
