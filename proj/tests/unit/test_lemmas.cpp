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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "olab/io.hpp"
#include "olab/lemmas.hpp"
#include "olab/profiles.hpp"
#include "olab/projections.hpp"

using namespace olab;

namespace {

// Linear scan over every grid magnitude.
double delta_oracle(const SpectralProfile& p, double eps) {
  double best = -1.0;
  double smallest = 1.0;
  bool any = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = std::abs(p.xi(i));
    if (a > 0.5) continue;
    any = true;
    smallest = std::min(smallest, a);
    double mass = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (std::abs(p.xi(j)) <= a) mass += std::norm(p[j]) * p.xi_step();
    if (mass <= eps * eps) best = std::max(best, a);
  }
  if (!any) return 0.5;
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j)
    if (std::abs(p.xi(j)) <= 0.5) total += std::norm(p[j]) * p.xi_step();
  if (total <= eps * eps) return 0.5;
  return best < 0.0 ? 0.5 * smallest : best;
}

SpectralProfile low_gaussian() {
  return midpoint_profile(-4.0, 4.0, 0x1p-10, [](double xi) { return cplx(gaussian_bump(xi, 0.0, 1.0, 4.0)); }, 0x1p-8);
}

SpectralProfile mode(double xi0) {
  std::vector<cplx> a(5);
  a[2] = cplx(1.0);
  return SpectralProfile(xi0 - 2 * 0x1p-12, 0x1p-12, a);
}

}  // namespace

TEST_CASE("lemma ids") {
  for (LemmaId id : all_lemma_ids()) CHECK(parse_lemma_id(to_string(id)) == id);
  CHECK(all_lemma_ids().size() == 8);
  CHECK_THROWS(parse_lemma_id("L9_9"));
}

TEST_CASE("delta_epsilon") {
  const SpectralProfile away = default_random_profile();
  for (double eps : {1e-3, 1e-1, 10.0}) CHECK(delta_epsilon(away, eps) == 0.5);
  const SpectralProfile g = low_gaussian();
  CHECK(delta_epsilon(g, 100.0) == 0.5);
  for (double eps : {1e-1, 3e-2, 1e-2, 1e-3, 1e-6}) CHECK(delta_epsilon(g, eps) == delta_oracle(g, eps));
  const double d = delta_epsilon(g, 1e-2);
  CHECK(d > 0.0);
  CHECK(d < 0.5);
}

TEST_CASE("low-frequency check") {
  const SpectralProfile g = low_gaussian();
  const LemmaReport zero = check_low_frequency(g, 0.0, 1e-2);
  CHECK(zero.id == LemmaId::L2_2);
  CHECK(zero.measured_lhs == 0.0);
  CHECK(zero.fitted_c == 0.0);
  CHECK(zero.pass);

  const LemmaReport r = check_low_frequency(g, 1e-3, 1e-2);
  CHECK(r.pass);
  CHECK(r.pass == r.recompute_pass());
  CHECK(r.measured_lhs <= r.bound_rhs);
  CHECK(r.param("delta").value() == delta_epsilon(g, 1e-2));

  // (LHS - eps)_+ is linear in t once eps is negligible.
  const double a = check_low_frequency(g, 1e-4, 1e-12).measured_lhs;
  const double b = check_low_frequency(g, 2e-4, 1e-12).measured_lhs;
  CHECK(b / a == doctest::Approx(2.0).epsilon(0.1));

  // With delta_eps = eps the two checks share their bound.
  const SpectralProfile away = default_random_profile();
  const LemmaReport l2 = check_low_frequency(away, 1e-3, 0.5);
  const LemmaReport l4 = check_low_frequency(away, 1e-3, 0.5, {}, true);
  CHECK(l4.id == LemmaId::L2_4);
  CHECK(l2.param("delta").value() == 0.5);
  CHECK(l4.bound_rhs == l2.bound_rhs);
  CHECK(l4.measured_lhs == l2.measured_lhs);

  LemmaConfig capped;
  capped.c_max = 1e-30;
  CHECK_FALSE(check_low_frequency(g, 1e-3, 1e-2, capped, true).pass);
  CHECK_THROWS_AS(check_low_frequency(g, 100.0, 1e-2), ResolutionError);
}

TEST_CASE("high-frequency check") {
  const LemmaReport r = check_high_frequency(mode(10.0));
  CHECK(r.pass);
  CHECK(r.param("slope").value() == doctest::Approx(1.0).epsilon(1e-2));
  LemmaConfig small;
  small.high_t = {1e-8, 2e-8, 4e-8};
  CHECK(check_high_frequency(mode(10.0), small).param("slope").value() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.fitted_c <= r.bound_rhs);
  const LemmaReport skip = check_high_frequency(default_random_profile());
  CHECK(skip.skipped);
  CHECK_FALSE(skip.pass);
  LemmaConfig bad;
  bad.slope_window = {1.5, 2.0};
  CHECK_FALSE(check_high_frequency(mode(10.0), bad).pass);
}

TEST_CASE("Wiener-piece check") {
  const SpectralProfile p = default_random_profile();
  CHECK_THROWS_AS(check_wiener_low(p, 1e-4, 1e-2, 9), std::out_of_range);
  const LemmaReport disjoint = check_wiener_low(p, 1e-4, 1e-2, 7);
  CHECK(disjoint.measured_lhs == 0.0);
  CHECK(disjoint.pass);
  CHECK(check_wiener_low(p, 0.0, 1e-2, 2).measured_lhs == 0.0);
  const LemmaReport r = check_wiener_low(p, 1e-4, 1e-2, 2);
  CHECK(r.measured_lhs > 0.0);
  CHECK(r.pass);
  CHECK(r.fitted_c == doctest::Approx(r.measured_lhs / (1e-2 + 1e-4 / 1e-2)));
}

TEST_CASE("square function and norm equivalence") {
  const SpectralProfile z(1.0, 0.5, std::vector<cplx>(4));
  const LemmaReport zr = check_square_function(z, std::nullopt);
  CHECK(zr.measured_lhs == 0.0);
  CHECK(zr.bound_rhs == 0.0);
  CHECK(zr.pass);
  CHECK(check_norm_equivalence(z).pass);

  const SpectralProfile p = default_random_profile();
  CHECK(check_square_function(p, std::nullopt).id == LemmaId::L2_6);
  for (double t : {0.0, 0.1, 1.0}) {
    const LemmaReport r = check_square_function(p, t);
    CHECK(r.id == LemmaId::L2_7);
    CHECK(r.pass);
  }
  const LemmaReport n = check_norm_equivalence(p);
  CHECK(n.pass);
  CHECK(n.fitted_c >= 1.0);
  CHECK(n.fitted_c <= 3.0);
}

TEST_CASE("Bernstein ratios") {
  const auto rs = check_bernstein(default_random_profile());
  REQUIRE(rs.size() == 3);
  for (const auto& r : rs) {
    CHECK(r.pass);
    CHECK(r.measured_lhs > 0.0);
  }
}

TEST_CASE("reports are self-auditing") {
  LemmaReport r;
  r.measured_lhs = 1.0;
  r.bound_rhs = 1.0;
  CHECK(r.recompute_pass());
  r.measured_lhs = 1.0 + 2e-6;
  CHECK_FALSE(r.recompute_pass());
  r.params = {{"t", 0.5}, {"eps", 1e-2}};
  CHECK(r.params_string() == "t=0.5;eps=0.01");
  r.skipped = true;
  r.measured_lhs = 0.0;
  CHECK_FALSE(r.recompute_pass());
}

TEST_CASE("default corpus") {
  const auto corpus = default_corpus();
  CHECK(corpus.size() == 12);
  for (const auto& [id, p] : corpus) {
    CHECK_FALSE(p.is_zero());
    CHECK(p[0] == cplx(0.0));
    CHECK(p[p.size() - 1] == cplx(0.0));
    for (Branch b : {Branch::plus, Branch::minus}) CHECK_MESSAGE(validate_resolution(p, {b, 1.0L}).ok, id);
  }
}

TEST_CASE("support window follows the group velocity") {
  const SpectralProfile p = midpoint_profile(2.0, 4.0, 0x1p-9, [](double xi) { return cplx(gaussian_bump(xi, 3.0, 0.1)); });
  const SupportWindow w0 = support_window(p, 0.0, Branch::plus);
  CHECK(w0.lo < 0.0);
  CHECK(w0.hi > 0.0);
  CHECK(w0.lo == doctest::Approx(-w0.hi));
  const SupportWindow w1 = support_window(p, 1.0, Branch::plus);
  CHECK(w1.hi < w0.hi);  // xi > 0 moves left
  CHECK(w1.margin_width > 0.0);
  // The field peaks inside the window.
  const XGrid g = XGrid::span(w1.lo, w1.hi, 2049);
  const SpaceField u = propagate(p, {Branch::plus, 1.0L}, g);
  const auto it = std::max_element(u.values.begin(), u.values.end(),
                                   [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  const double x_peak = g.x(static_cast<std::size_t>(it - u.values.begin()));
  CHECK(x_peak == doctest::Approx(-phase_derivative(3.0, Branch::plus)).epsilon(0.05));
}

TEST_CASE("corpus runs") {
  CHECK(run_corpus({}).empty());
  std::vector<CorpusProfile> small = {{"a", default_random_profile()}, {"b", mode(10.0)}};
  LemmaConfig only;
  only.only = {LemmaId::L2_6, LemmaId::NORM_EQUIV};
  const auto r = run_corpus(small, only);
  CHECK(r.size() == 4);
  CHECK(r[0].id == LemmaId::NORM_EQUIV);
  CHECK(r[1].id == LemmaId::L2_6);
  CHECK(r[2].profile_id == "b");

  LemmaConfig cheap;
  cheap.n_x = 256;
  const auto all = run_corpus(small, cheap);
  // NORM_EQUIV 1 + BERNSTEIN 3 + L2_6 1 + L2_7 2 + L2_2 4 + L2_4 4 + L2_3 1 = 16, plus L2_5 over the k range.
  const auto [a0, a1] = wiener_range(small[0].profile);
  const auto [b0, b1] = wiener_range(small[1].profile);
  const auto clip = [](int lo, int hi) { return std::min(hi, 8) - std::max(lo, -8) + 1; };
  CHECK(all.size() == static_cast<std::size_t>(32 + clip(a0, a1) + std::max(0, clip(b0, b1))));
  const CorpusSummary s = summarize(all);
  CHECK(s.total == all.size());
  CHECK(s.failed == 0);
  CHECK(s.skipped == 1);  // profile a has no content above 8
  for (const auto& rep : all) CHECK(rep.pass == rep.recompute_pass());
}

TEST_CASE("corpus from a directory") {
  const auto dir = std::filesystem::temp_directory_path() / "olab_corpus_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_profile_csv(mode(10.0), (dir / "z_mode.csv").string());
  write_profile_csv(default_random_profile(), (dir / "a_bump.csv").string());
  const auto c = load_corpus(dir.string());
  REQUIRE(c.size() == 2);
  CHECK(c[0].id == "a_bump");
  CHECK(c[1].id == "z_mode");
  std::filesystem::remove_all(dir);
  CHECK_THROWS(load_corpus(dir.string()));
}
