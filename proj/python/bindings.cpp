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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "olab/app.hpp"
#include "olab/lemmas.hpp"
#include "olab/profiles.hpp"
#include "olab/projections.hpp"
#include "olab/random.hpp"
#include "olab/rough.hpp"
#include "olab/spectral.hpp"

namespace py = pybind11;
using namespace olab;

namespace {

using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexArray to_array(std::span<const cplx> v) {
  ComplexArray a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::array_t<double> grid_points(const XGrid& g) {
  py::array_t<double> a(static_cast<py::ssize_t>(g.count));
  for (std::size_t j = 0; j < g.count; ++j) a.mutable_data()[j] = g.x(j);
  return a;
}

py::tuple field_tuple(const SpaceField& u) { return py::make_tuple(grid_points(u.grid), to_array(u.values)); }

py::dict report_dict(const LemmaReport& r) {
  py::dict d;
  d["lemma_id"] = to_string(r.id);
  d["profile_id"] = r.profile_id;
  py::dict params;
  for (const auto& [k, v] : r.params) params[py::str(k)] = v;
  d["params"] = params;
  d["measured_lhs"] = r.measured_lhs;
  d["bound_rhs"] = r.bound_rhs;
  d["fitted_c"] = r.fitted_c;
  d["pass"] = r.pass;
  d["skipped"] = r.skipped;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Linear Ostrovsky propagator: spectral evolution, projections and numerical checks";
  m.attr("__version__") = version_string();

  py::enum_<Branch>(m, "Branch").value("plus", Branch::plus).value("minus", Branch::minus);

  py::class_<SpectralProfile>(m, "SpectralProfile")
      .def(py::init([](double xi_min, double xi_step, ComplexArray amps, double zero_cut) {
             return SpectralProfile(xi_min, xi_step, std::vector<cplx>(amps.data(), amps.data() + amps.size()),
                                    zero_cut);
           }),
           py::arg("xi_min"), py::arg("xi_step"), py::arg("amplitudes"), py::arg("zero_cut") = kDefaultZeroCut)
      .def_property_readonly("xi_min", &SpectralProfile::xi_min)
      .def_property_readonly("xi_step", &SpectralProfile::xi_step)
      .def_property_readonly("zero_cut", &SpectralProfile::zero_cut)
      .def_property_readonly("truncated_mass", &SpectralProfile::truncated_mass)
      .def_property_readonly("amplitudes", [](const SpectralProfile& p) { return to_array(p.amplitudes()); })
      .def_property_readonly("xi",
                             [](const SpectralProfile& p) {
                               py::array_t<double> a(static_cast<py::ssize_t>(p.size()));
                               for (std::size_t j = 0; j < p.size(); ++j) a.mutable_data()[j] = p.xi(j);
                               return a;
                             })
      .def("__len__", &SpectralProfile::size);

  m.def("phase", &phase, py::arg("xi"), py::arg("sign") = Branch::plus);
  m.def(
      "evolve",
      [](const SpectralProfile& p, long double t, Branch sign) { return evolve_spectral(p, {sign, t}); },
      py::arg("profile"), py::arg("t"), py::arg("sign") = Branch::plus);
  m.def(
      "propagate",
      [](const SpectralProfile& p, long double t, double x_min, double x_max, std::size_t points, Branch sign) {
        return field_tuple(propagate(p, {sign, t}, XGrid::span(x_min, x_max, points)));
      },
      py::arg("profile"), py::arg("t"), py::arg("x_min") = -20.0, py::arg("x_max") = 20.0,
      py::arg("points") = 1025, py::arg("sign") = Branch::plus, "Returns (x, u) with u = U(t) f on the grid.");
  m.def(
      "propagate_at",
      [](const SpectralProfile& p, long double t, double x, Branch sign) { return propagate_at(p, {sign, t}, x); },
      py::arg("profile"), py::arg("t"), py::arg("x"), py::arg("sign") = Branch::plus);
  m.def("hs_norm", &hs_norm, py::arg("profile"), py::arg("s"));
  m.def("l2_norm", &l2_norm, py::arg("profile"));
  m.def(
      "space_l2_norm",
      [](const SpectralProfile& p) { return lp_norm_space(synthesize(p, plancherel_grid(p)), 2.0); },
      py::arg("profile"), "L2 norm of the inverse transform on a grid covering one full period.");
  m.def("set_threads", &set_thread_count, py::arg("n"));

  m.def("dyadic_cutoff", &dyadic_cutoff, py::arg("xi"));
  m.def("wiener_window", &wiener_window, py::arg("xi"));
  m.def("project_low", &project_low, py::arg("profile"), py::arg("N"));
  m.def("project_band", &project_band, py::arg("profile"), py::arg("N"));
  m.def("project_high", &project_high, py::arg("profile"), py::arg("N"));
  m.def(
      "wiener_decompose",
      [](const SpectralProfile& p) {
        const WienerDecomposition d = wiener_decompose(p);
        py::dict out;
        for (int k = d.k_min; k <= d.k_max; ++k) out[py::int_(k)] = d.piece(k);
        return out;
      },
      py::arg("profile"), "Pieces keyed by k; their sum reproduces the profile exactly.");
  m.def(
      "reconstruct",
      [](const std::vector<SpectralProfile>& pieces) {
        WienerDecomposition d;
        d.pieces = pieces;
        return d.reconstruct();
      },
      py::arg("pieces"));

  m.def(
      "counterexample_ratio",
      [](int k, double s, int n_t, int n_x, Branch sign) {
        const CounterexampleResult r = counterexample_ratio({k, s}, {sign, n_t, n_x, 128, true});
        return py::dict(py::arg("k") = r.k, py::arg("ratio") = r.ratio, py::arg("sup_l4") = r.sup_l4,
                        py::arg("hs") = r.hs, py::arg("t_max") = r.t_max);
      },
      py::arg("k"), py::arg("s"), py::arg("n_t") = 256, py::arg("n_x") = 129, py::arg("sign") = Branch::plus);
  m.def(
      "scaling_slope",
      [](const std::vector<std::pair<double, double>>& points) { return scaling_fit(points).slope; },
      py::arg("points"), "Slope of log2 R against k.");

  m.def("philox4x32", &philox4x32, py::arg("counter"), py::arg("key"));
  m.def(
      "khinchine",
      [](const std::vector<cplx>& c, double p, std::size_t n, std::uint64_t seed) {
        const KhinchineResult r = khinchine_check(c, p, n, seed);
        return py::dict(py::arg("p") = r.p, py::arg("ratio") = r.ratio, py::arg("std_error") = r.std_error,
                        py::arg("n_samples") = r.n_samples);
      },
      py::arg("coefficients"), py::arg("p"), py::arg("n_samples") = 100000, py::arg("seed") = 0);
  m.def("default_random_profile", &default_random_profile);
  m.def(
      "stochastic_continuity",
      [](const SpectralProfile& p, const std::vector<double>& t_values, double x, double alpha, std::size_t n,
         std::uint64_t seed, Branch sign) {
        const TailCurve c = stochastic_continuity(p, {x, alpha, t_values, n, seed, sign});
        std::vector<std::pair<double, double>> wilson;
        for (const auto& w : c.wilson) wilson.emplace_back(w.lo, w.hi);
        return py::dict(py::arg("t") = c.t_values, py::arg("prob") = c.empirical_probs,
                        py::arg("wilson") = wilson, py::arg("n_samples") = c.n_samples);
      },
      py::arg("profile"), py::arg("t_values"), py::arg("x") = 0.0, py::arg("alpha") = 0.5,
      py::arg("n_samples") = 2000, py::arg("seed") = 0, py::arg("sign") = Branch::plus);

  m.def(
      "verify_lemmas",
      [](const std::vector<std::string>& only, Branch sign) {
        LemmaConfig cfg;
        cfg.sign = sign;
        for (const auto& id : only) cfg.only.push_back(parse_lemma_id(id));
        py::list out;
        for (const auto& r : run_corpus(default_corpus(), cfg)) out.append(report_dict(r));
        return out;
      },
      py::arg("only") = std::vector<std::string>{}, py::arg("sign") = Branch::plus,
      "Runs the selected checks over the built-in corpus.");
  m.def(
      "corpus_ids",
      [] {
        std::vector<std::string> ids;
        for (const auto& c : default_corpus()) ids.push_back(c.id);
        return ids;
      });

  m.def(
      "run_cli", [](std::vector<std::string> args) {
        args.insert(args.begin(), "ostrovsky_lab");
        return run_cli(args);
      },
      py::arg("args"), "Same as the command-line tool; returns the exit code.");
}
