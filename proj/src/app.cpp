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

#include "olab/app.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "olab/io.hpp"
#include "olab/lemmas.hpp"
#include "olab/profiles.hpp"
#include "olab/random.hpp"
#include "olab/rough.hpp"

#ifndef OLAB_VERSION
#define OLAB_VERSION "0.0.0"
#endif

namespace olab {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kThreadsEnv = "OSTROVSKY_LAB_THREADS";

struct KeySpec {
  std::string name;
  std::vector<Subcommand> scope;  // empty: every subcommand
  std::string help;
  std::function<void(RunConfig&, const std::string&)> set;
};

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

int to_int(const std::string& v) {
  const long long n = parse_int(v);
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("integer out of range: " + v);
  }
  return static_cast<int>(n);
}

std::size_t to_count(const std::string& v) {
  const long long n = parse_int(v);
  if (n <= 0) throw std::invalid_argument("expected a positive integer: " + v);
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("expected true or false: " + v);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  for (const auto& s : split_csv_line(v)) {
    const std::string t = trim(s);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

const std::vector<KeySpec>& key_specs() {
  using S = Subcommand;
  static const std::vector<KeySpec> specs = {
      {"sign", {}, "branch of the phase: + or -", [](RunConfig& c, const std::string& v) { c.sign = parse_branch(v); }},
      {"seed", {}, "64-bit seed",
       [](RunConfig& c, const std::string& v) {
         const long long n = parse_int(v);
         if (n < 0) throw std::invalid_argument("seed must be nonnegative");
         c.seed = static_cast<std::uint64_t>(n);
       }},
      {"threads", {}, "worker thread cap",
       [](RunConfig& c, const std::string& v) { c.threads = static_cast<unsigned>(to_count(v)); }},
      {"out", {}, "output CSV path", [](RunConfig& c, const std::string& v) { c.out = v; }},
      {"s", {S::counterexample}, "Sobolev index", [](RunConfig& c, const std::string& v) { c.s = parse_double(v); }},
      {"k-min", {S::counterexample}, "first band index",
       [](RunConfig& c, const std::string& v) { c.k_min = to_int(v); }},
      {"k-max", {S::counterexample}, "last band index",
       [](RunConfig& c, const std::string& v) { c.k_max = to_int(v); }},
      {"nt", {S::counterexample}, "time samples per scan",
       [](RunConfig& c, const std::string& v) { c.n_t = static_cast<int>(to_count(v)); }},
      {"nx", {S::counterexample}, "space samples over |x| <= 2^-k",
       [](RunConfig& c, const std::string& v) { c.n_x = static_cast<int>(to_count(v)); }},
      {"band-cells", {S::counterexample}, "grid cells across one band",
       [](RunConfig& c, const std::string& v) { c.band_cells = static_cast<int>(to_count(v)); }},
      {"refine", {S::counterexample}, "refine around each argmax (true/false)",
       [](RunConfig& c, const std::string& v) { c.refine = to_bool(v); }},
      {"p", {S::khinchine}, "moment orders", [](RunConfig& c, const std::string& v) { c.p_list = parse_double_list(v); }},
      {"c", {S::khinchine}, "real coefficient sequence",
       [](RunConfig& c, const std::string& v) { c.coefficients = parse_double_list(v); }},
      {"n", {S::khinchine, S::stochastic_continuity}, "Monte Carlo samples",
       [](RunConfig& c, const std::string& v) { c.n_samples = to_count(v); }},
      {"alpha", {S::stochastic_continuity}, "deviation threshold",
       [](RunConfig& c, const std::string& v) { c.alpha = parse_double(v); }},
      {"t", {S::stochastic_continuity, S::trace, S::propagate}, "times (a single time for propagate)",
       [](RunConfig& c, const std::string& v) {
         if (c.subcommand == Subcommand::propagate) {
           c.t = parse_double(v);
         } else {
           c.t_list = parse_double_list(v);
         }
       }},
      {"x", {S::stochastic_continuity, S::trace}, "evaluation point",
       [](RunConfig& c, const std::string& v) { c.x = parse_double(v); }},
      {"profile", {S::stochastic_continuity, S::trace, S::propagate}, "profile CSV (xi,re,im)",
       [](RunConfig& c, const std::string& v) { c.profile = v; }},
      {"x-min", {S::propagate}, "left end of the x grid",
       [](RunConfig& c, const std::string& v) { c.x_min = parse_double(v); }},
      {"x-max", {S::propagate}, "right end of the x grid",
       [](RunConfig& c, const std::string& v) { c.x_max = parse_double(v); }},
      {"points", {S::propagate}, "x grid points", [](RunConfig& c, const std::string& v) { c.points = to_count(v); }},
      {"corpus", {S::verify_lemmas}, "directory of profile CSVs",
       [](RunConfig& c, const std::string& v) { c.corpus = v; }},
      {"only", {S::verify_lemmas}, "comma-separated lemma ids",
       [](RunConfig& c, const std::string& v) {
         c.only = split_list(v);
         for (const auto& id : c.only) parse_lemma_id(id);
       }},
      {"c-max", {S::verify_lemmas}, "cap on fitted constants",
       [](RunConfig& c, const std::string& v) { c.c_max = parse_double(v); }},
  };
  return specs;
}

const char* describe(Subcommand c) {
  switch (c) {
    case Subcommand::propagate: return "evaluate U(t)f on an x grid";
    case Subcommand::counterexample: return "maximal-function ratios R_k and their scaling fit";
    case Subcommand::khinchine: return "Gaussian moment ratios for a coefficient sequence";
    case Subcommand::stochastic_continuity: return "tail probabilities of U(t)f - f for randomized data";
    case Subcommand::verify_lemmas: return "run the inequality checks over a profile corpus";
    case Subcommand::trace: return "|U(t)f(x) - f(x)| along a decreasing time sequence";
  }
  return "";
}

bool in_scope(const KeySpec& k, Subcommand c) {
  return k.scope.empty() || std::find(k.scope.begin(), k.scope.end(), c) != k.scope.end();
}

const std::vector<Subcommand>& all_subcommands() {
  static const std::vector<Subcommand> all = {Subcommand::propagate,    Subcommand::counterexample,
                                              Subcommand::khinchine,    Subcommand::stochastic_continuity,
                                              Subcommand::verify_lemmas, Subcommand::trace};
  return all;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where) {
  for (const auto& k : key_specs()) {
    if (k.name != key || !in_scope(k, cfg.subcommand)) continue;
    try {
      k.set(cfg, value);
    } catch (const std::exception& e) {
      throw UsageError(where + "invalid value for '" + key + "': " + e.what());
    }
    for (auto& [ek, ev] : cfg.echo) {
      if (ek == key) {
        ev = value;
        return;
      }
    }
    cfg.echo.emplace_back(key, value);
    return;
  }
  throw UsageError(where + "unknown key '" + key + "' for " + to_string(cfg.subcommand));
}

void require(bool present, const char* key) {
  if (!present) throw UsageError(std::string("missing required parameter '") + key + "'");
}

void validate(const RunConfig& c) {
  switch (c.subcommand) {
    case Subcommand::counterexample:
      require(c.s.has_value(), "s");
      require(c.k_min.has_value(), "k-min");
      require(c.k_max.has_value(), "k-max");
      if (*c.k_min > *c.k_max) throw UsageError("'k-min' must not exceed 'k-max'");
      if (*c.k_min < 1 || *c.k_max > 12) throw UsageError("'k-min'/'k-max' must lie in [1, 12]");
      break;
    case Subcommand::khinchine:
      if (c.p_list.empty()) throw UsageError("'p' must not be empty");
      for (double p : c.p_list) {
        if (!(p >= 2.0)) throw UsageError("'p' values must be >= 2");
      }
      if (c.coefficients.empty()) throw UsageError("'c' must not be empty");
      break;
    case Subcommand::stochastic_continuity:
      require(!c.t_list.empty(), "t");
      if (!(c.alpha > 0.0)) throw UsageError("'alpha' must be positive");
      break;
    case Subcommand::trace:
      require(!c.t_list.empty(), "t");
      break;
    case Subcommand::propagate:
      require(!c.profile.empty(), "profile");
      if (!(c.x_max > c.x_min)) throw UsageError("'x-max' must exceed 'x-min'");
      if (c.points < 2) throw UsageError("'points' must be at least 2");
      break;
    case Subcommand::verify_lemmas:
      break;
  }
}

SpectralProfile load_profile(const RunConfig& c) {
  return c.profile.empty() ? default_random_profile() : read_profile_csv(c.profile);
}

std::string fmt(double v) { return format_double(v); }

Json run_counterexample(const RunConfig& c, ExperimentReport& r) {
  r.header = {"k", "Rk", "log2Rk"};
  CounterexampleParams params;
  params.sign = c.sign;
  params.n_t = c.n_t;
  params.n_x = c.n_x;
  params.band_cells = c.band_cells;
  params.refine = c.refine;
  std::vector<std::pair<double, double>> pts;
  for (int k = *c.k_min; k <= *c.k_max; ++k) {
    const CounterexampleResult res = counterexample_ratio({k, *c.s}, params);
    r.rows.push_back({std::to_string(k), fmt(res.ratio), fmt(std::log2(res.ratio))});
    pts.emplace_back(k, res.ratio);
  }
  const double expected = 0.25 - *c.s;
  Json fit = {{"expected_slope", expected}};
  if (pts.size() >= 3) {
    const ScalingFit f = scaling_fit(pts);
    fit = {{"slope", f.slope}, {"residual", f.residual}, {"expected_slope", expected}, {"intercept", f.intercept}};
    if (std::abs(f.slope - expected) > 0.05) r.exit_code = kExitCheckFailed;
  }
  return fit;
}

Json run_khinchine(const RunConfig& c, ExperimentReport& r) {
  r.header = {"p", "ratio", "std_error"};
  std::vector<cplx> coeffs(c.coefficients.begin(), c.coefficients.end());
  const std::size_t n = c.n_samples == 0 ? 100000 : c.n_samples;
  Json checks = Json::array();
  for (double p : c.p_list) {
    const KhinchineResult k = khinchine_check(coeffs, p, n, c.seed);
    r.rows.push_back({fmt(p), fmt(k.ratio), fmt(k.std_error)});
    bool ok = k.ratio <= 2.0;
    if (p == 2.0) ok = ok && std::abs(k.ratio - 1.0) <= 3.0 * k.std_error;
    if (!ok) r.exit_code = kExitCheckFailed;
    checks.push_back({{"p", p}, {"ratio", k.ratio}, {"std_error", k.std_error}, {"pass", ok}});
  }
  return {{"n_samples", n}, {"ratio_cap", 2.0}, {"checks", checks}};
}

Json run_stochastic(const RunConfig& c, ExperimentReport& r) {
  r.header = {"t", "prob", "wilson_lo", "wilson_hi"};
  StochasticContinuityParams params;
  params.x = c.x;
  params.alpha = c.alpha;
  params.t_values = c.t_list;
  params.n_samples = c.n_samples == 0 ? 2000 : c.n_samples;
  params.seed = c.seed;
  params.sign = c.sign;
  const TailCurve curve = stochastic_continuity(load_profile(c), params);
  bool monotone = true;
  bool zero_at_zero = true;
  for (std::size_t i = 0; i < curve.t_values.size(); ++i) {
    r.rows.push_back({fmt(curve.t_values[i]), fmt(curve.empirical_probs[i]), fmt(curve.wilson[i].lo),
                      fmt(curve.wilson[i].hi)});
    if (curve.t_values[i] == 0.0 && curve.empirical_probs[i] != 0.0) zero_at_zero = false;
    if (i > 0 && curve.empirical_probs[i] > curve.empirical_probs[i - 1] &&
        curve.wilson[i].lo > curve.wilson[i - 1].hi) {
      monotone = false;
    }
  }
  if (!monotone || !zero_at_zero) r.exit_code = kExitCheckFailed;
  const TailOverlay ov = fit_tail_overlay(curve);
  Json fit = {{"alpha", curve.alpha},
              {"x", curve.x},
              {"n_samples", curve.n_samples},
              {"weakly_decreasing", monotone},
              {"zero_at_t0", zero_at_zero},
              {"overlay_valid", ov.valid}};
  if (ov.valid) {
    fit["c_fit"] = ov.c_fit;
    fit["c1"] = ov.c1;
    fit["touch_t"] = curve.t_values[ov.touch_index];
    fit["bound_dominates_below"] = ov.dominates_below;
    fit["bound"] = ov.bound;
  }
  return fit;
}

Json run_verify(const RunConfig& c, ExperimentReport& r) {
  r.header = {"lemma_id", "profile_id", "params", "measured_lhs", "bound_rhs", "fitted_C", "pass"};
  LemmaConfig lc;
  lc.sign = c.sign;
  lc.c_max = c.c_max;
  for (const auto& id : c.only) lc.only.push_back(parse_lemma_id(id));
  const auto corpus = c.corpus.empty() ? default_corpus() : load_corpus(c.corpus);
  const auto reports = run_corpus(corpus, lc);
  Json skips = Json::array();
  for (const auto& rep : reports) {
    r.rows.push_back({to_string(rep.id), rep.profile_id, rep.params_string(), fmt(rep.measured_lhs),
                      fmt(rep.bound_rhs), fmt(rep.fitted_c), rep.skipped ? "skip" : (rep.pass ? "true" : "false")});
    if (rep.skipped) skips.push_back({{"lemma_id", to_string(rep.id)}, {"profile_id", rep.profile_id}, {"note", rep.note}});
  }
  const CorpusSummary s = summarize(reports);
  if (s.failed > 0) r.exit_code = kExitCheckFailed;
  return {{"profiles", corpus.size()}, {"total", s.total},     {"passed", s.passed},
          {"failed", s.failed},        {"skipped", s.skipped}, {"skips", skips}};
}

Json run_trace(const RunConfig& c, ExperimentReport& r) {
  r.header = {"t", "deviation"};
  const auto dev = convergence_trace(load_profile(c), c.x, c.t_list, c.sign);
  for (std::size_t i = 0; i < dev.size(); ++i) r.rows.push_back({fmt(c.t_list[i]), fmt(dev[i])});
  return Json::object();
}

Json run_propagate(const RunConfig& c, ExperimentReport& r) {
  r.header = {"x", "re", "im", "abs"};
  const SpectralProfile p = read_profile_csv(c.profile);
  const SpaceField u = propagate(p, {c.sign, static_cast<long double>(c.t)}, XGrid::span(c.x_min, c.x_max, c.points));
  for (std::size_t j = 0; j < u.values.size(); ++j) {
    const cplx v = u.values[j];
    r.rows.push_back({fmt(u.grid.x(j)), fmt(v.real()), fmt(v.imag()), fmt(std::abs(v))});
  }
  return {{"truncated_mass", p.truncated_mass()}};
}

}  // namespace

const char* version_string() { return OLAB_VERSION; }

const char* to_string(Subcommand c) {
  switch (c) {
    case Subcommand::propagate: return "propagate";
    case Subcommand::counterexample: return "counterexample";
    case Subcommand::khinchine: return "khinchine";
    case Subcommand::stochastic_continuity: return "stochastic-continuity";
    case Subcommand::verify_lemmas: return "verify-lemmas";
    case Subcommand::trace: return "trace";
  }
  return "?";
}

std::vector<std::pair<std::string, std::pair<std::string, int>>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::pair<std::string, int>>> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(n) + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw UsageError(path + ":" + std::to_string(n) + ": empty key");
    out.push_back({std::move(key), {std::move(value), n}});
  }
  return out;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& argv) {
  CLI::App app{"Numerical laboratory for the free Ostrovsky propagator", "ostrovsky_lab"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  struct Slot {
    CLI::App* sub = nullptr;
    Subcommand cmd{};
    std::string config;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Slot> slots(all_subcommands().size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    Slot& s = slots[i];
    s.cmd = all_subcommands()[i];
    s.sub = app.add_subcommand(to_string(s.cmd), describe(s.cmd));
    s.sub->add_option("--config", s.config, "file of 'key = value' lines");
    for (const auto& k : key_specs()) {
      if (!in_scope(k, s.cmd)) continue;
      s.options[k.name] = s.sub->add_option("--" + k.name, s.values[k.name], k.help);
    }
  }

  std::vector<const char*> cargv;
  for (const auto& a : argv) cargv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    std::cout << version_string() << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  for (Slot& s : slots) {
    if (!s.sub->parsed()) continue;
    RunConfig cfg;
    cfg.subcommand = s.cmd;
    if (!s.config.empty()) {
      for (const auto& [key, vl] : read_config_file(s.config)) {
        apply(cfg, key, vl.first, s.config + ":" + std::to_string(vl.second) + ": ");
      }
    }
    bool threads_set = false;
    for (const auto& k : key_specs()) {
      const auto it = s.options.find(k.name);
      if (it == s.options.end() || it->second->count() == 0) continue;
      apply(cfg, k.name, s.values[k.name], "");
    }
    for (const auto& [key, value] : cfg.echo) threads_set = threads_set || key == "threads";
    if (!threads_set) {
      if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
        apply(cfg, "threads", env, std::string(kThreadsEnv) + ": ");
      }
    }
    validate(cfg);
    return cfg;
  }
  throw UsageError("no subcommand given");
}

ExperimentReport dispatch(const RunConfig& cfg) {
  set_thread_count(cfg.threads);
  ExperimentReport r;
  const auto start = std::chrono::steady_clock::now();
  Json fit;
  switch (cfg.subcommand) {
    case Subcommand::counterexample: fit = run_counterexample(cfg, r); break;
    case Subcommand::khinchine: fit = run_khinchine(cfg, r); break;
    case Subcommand::stochastic_continuity: fit = run_stochastic(cfg, r); break;
    case Subcommand::verify_lemmas: fit = run_verify(cfg, r); break;
    case Subcommand::trace: fit = run_trace(cfg, r); break;
    case Subcommand::propagate: fit = run_propagate(cfg, r); break;
  }
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.fit_json = fit.dump();

  const CsvTable table{r.header, r.rows};
  if (cfg.out.empty()) {
    table.write(std::cout);
    return r;
  }
  table.write(cfg.out);
  Json config = Json::object();
  config["subcommand"] = to_string(cfg.subcommand);
  for (const auto& [k, v] : cfg.echo) config[k] = v;
  const Json meta = {{"version", version_string()},
                     {"config", config},
                     {"fit", fit},
                     {"rows", r.rows.size()},
                     {"exit_code", r.exit_code},
                     {"wall_clock_seconds", r.wall_clock}};
  std::ofstream side(cfg.out + ".meta.json", std::ios::binary);
  if (!side) throw std::runtime_error("cannot write " + cfg.out + ".meta.json");
  side << meta.dump(2) << '\n';
  return r;
}

int run_cli(const std::vector<std::string>& argv) {
  try {
    const std::optional<RunConfig> cfg = parse_config(argv);
    if (!cfg) return kExitOk;
    const ExperimentReport r = dispatch(*cfg);
    if (!cfg->out.empty() && r.fit_json != "{}") std::cout << r.fit_json << '\n';
    if (r.exit_code == kExitCheckFailed) std::cerr << "check failed: " << r.fit_json << '\n';
    return r.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace olab
