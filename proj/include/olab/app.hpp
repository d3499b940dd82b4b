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

#ifndef OLAB_APP_HPP
#define OLAB_APP_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "olab/spectral.hpp"

namespace olab {

const char* version_string();

enum class Subcommand { propagate, counterexample, khinchine, stochastic_continuity, verify_lemmas, trace };

const char* to_string(Subcommand c);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 2;

/// Bad or missing parameters. The message names the offending key.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::propagate;
  Branch sign = Branch::plus;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;  // empty: CSV on stdout, no sidecar

  // counterexample
  std::optional<double> s;
  std::optional<int> k_min;
  std::optional<int> k_max;
  int n_t = 256;
  int n_x = 129;
  int band_cells = 128;
  bool refine = true;

  // khinchine
  std::vector<double> p_list = {2.0, 4.0, 8.0, 16.0};
  std::vector<double> coefficients = {1.0, 0.5, 0.25, 0.125};

  // stochastic-continuity, trace, propagate
  std::size_t n_samples = 0;  // 0: subcommand default
  double alpha = 0.5;
  std::vector<double> t_list;
  double x = 0.0;
  std::string profile;  // empty: built-in Gaussian bump profile
  double t = 0.0;
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t points = 1025;

  // verify-lemmas
  std::string corpus;  // empty: built-in corpus
  std::vector<std::string> only;
  std::optional<double> c_max;

  std::vector<std::pair<std::string, std::string>> echo;  // resolved key/value pairs
};

/// Parses argv (argv[0] is the program name). A `--config <file>` of
/// `key = value` lines supplies defaults; flags given on the command line win.
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_config(const std::vector<std::string>& argv);

/// Reads `key = value` lines; `#` starts a comment. Malformed lines throw
/// UsageError with the line number.
std::vector<std::pair<std::string, std::pair<std::string, int>>> read_config_file(const std::string& path);

struct ExperimentReport {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string fit_json;  // JSON object text, "{}" when there is nothing to fit
  double wall_clock = 0.0;
  int exit_code = kExitOk;
  std::string message;
};

/// Runs the selected experiment and writes the CSV (and sidecar when out is set).
ExperimentReport dispatch(const RunConfig& cfg);

/// Full entry point: parse, dispatch, map errors to exit codes.
int run_cli(const std::vector<std::string>& argv);

}  // namespace olab

#endif  // OLAB_APP_HPP
