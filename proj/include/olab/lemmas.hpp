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

#ifndef OLAB_LEMMAS_HPP
#define OLAB_LEMMAS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "olab/spectral.hpp"

namespace olab {

enum class LemmaId { L2_2, L2_3, L2_4, L2_5, L2_6, L2_7, NORM_EQUIV, BERNSTEIN };

const char* to_string(LemmaId id);
LemmaId parse_lemma_id(const std::string& s);
const std::vector<LemmaId>& all_lemma_ids();

/// One numerical instance of an inequality. The verdict is recomputable from
/// the stored fields: pass == (measured_lhs <= bound_rhs * (1 + rel_tol) + abs_tol)
/// and, when a slope window is present, slope inside it.
struct LemmaReport {
  LemmaId id = LemmaId::L2_2;
  std::string profile_id;
  std::vector<std::pair<std::string, double>> params;
  double measured_lhs = 0.0;
  double bound_rhs = 0.0;
  double fitted_c = 0.0;
  double rel_tol = 1e-6;
  double abs_tol = 1e-14;
  std::optional<std::pair<double, double>> slope_window;
  bool pass = false;
  bool skipped = false;
  std::string note;

  std::optional<double> param(const std::string& name) const;
  std::string params_string() const;
  bool recompute_pass() const;
};

struct CorpusProfile {
  std::string id;
  SpectralProfile profile;
};

/// Gaussian bumps, band indicators and two-scale mixtures, each on a grid fine
/// enough for the propagator at |t| <= 1 on both branches.
std::vector<CorpusProfile> default_corpus();

/// Every `*.csv` profile in dir, sorted by file name.
std::vector<CorpusProfile> load_corpus(const std::string& dir);

/// Region carrying the field at time t, widened by margin on each side
/// (as a fraction of its width). Used for every sup over x.
struct SupportWindow {
  double lo = 0.0;
  double hi = 0.0;
  double margin_width = 0.0;
};
SupportWindow support_window(const SpectralProfile& p, double t, Branch sign, double margin = 0.5);

struct LemmaConfig {
  Branch sign = Branch::plus;
  std::size_t n_x = 4096;
  double margin = 0.5;
  // Low-frequency (L2_2, L2_4) instances.
  std::vector<double> low_t = {1e-4, 1e-3};
  std::vector<double> low_eps = {1e-1, 1e-2};
  // L2_3 slope fit.
  std::vector<double> high_t = {};  // empty: 13 points, 4 per decade over [1e-6, 1e-3]
  std::pair<double, double> slope_window = {0.95, 1.05};
  // Wiener-piece (L2_5) instances.
  double wiener_t = 1e-4;
  double wiener_eps = 1e-2;
  // Square-function times; t = 0 is L2_6, the rest L2_7.
  std::vector<double> square_t = {0.1, 1.0};
  double square_tol = 1e-6;
  // Optional cap on the fitted constants of 2.2 / 2.4 / 2.5.
  std::optional<double> c_max;
  // Threshold on the unit-scale Bernstein ratio for the (4, inf) pair.
  double bernstein_c = 10.0;
  std::vector<LemmaId> only;  // empty: all
};

/// Largest grid-aligned delta <= 1/2 with (sum_{|xi| <= delta} |f|^2 dxi)^{1/2} <= eps.
double delta_epsilon(const SpectralProfile& p, double eps);

LemmaReport check_low_frequency(const SpectralProfile& p, double t, double eps, const LemmaConfig& cfg = {},
                                bool delta_is_eps = false);
LemmaReport check_high_frequency(const SpectralProfile& p, const LemmaConfig& cfg = {});
LemmaReport check_wiener_low(const SpectralProfile& p, double t, double eps, int k, const LemmaConfig& cfg = {});
LemmaReport check_square_function(const SpectralProfile& p, std::optional<double> t, const LemmaConfig& cfg = {});
LemmaReport check_norm_equivalence(const SpectralProfile& p);
std::vector<LemmaReport> check_bernstein(const SpectralProfile& p, const LemmaConfig& cfg = {});

std::vector<double> default_high_times();

/// Runs every selected check on every profile in a fixed order. Check errors
/// become skip reports.
std::vector<LemmaReport> run_corpus(const std::vector<CorpusProfile>& corpus, const LemmaConfig& cfg = {});

struct CorpusSummary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};
CorpusSummary summarize(const std::vector<LemmaReport>& reports);

}  // namespace olab

#endif  // OLAB_LEMMAS_HPP
