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

#ifndef OLAB_IO_HPP
#define OLAB_IO_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "olab/spectral.hpp"

namespace olab {

// Relative tolerance on the spacing of xi values read from a profile file.
inline constexpr double kUniformSpacingTol = 1e-9;

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v);

/// Parses a full token as double; throws std::invalid_argument otherwise.
double parse_double(std::string_view s);
long long parse_int(std::string_view s);

/// Comma-separated list of doubles.
std::vector<double> parse_double_list(std::string_view s);

void write_profile_csv(const SpectralProfile& p, std::ostream& os);
void write_profile_csv(const SpectralProfile& p, const std::string& path);

/// Reads `xi,re,im`. Rejects a wrong header, malformed numbers and spacing
/// that deviates from uniform by more than kUniformSpacingTol (relative).
SpectralProfile read_profile_csv(std::istream& is, double zero_cut = kDefaultZeroCut);
SpectralProfile read_profile_csv(const std::string& path, double zero_cut = kDefaultZeroCut);

void write_field_csv(const SpaceField& u, std::ostream& os);
void write_field_csv(const SpaceField& u, const std::string& path);
/// Reads back `x,re,im,abs`.
SpaceField read_field_csv(std::istream& is);

/// Minimal CSV table: a header row and rows of preformatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os) const;
  void write(const std::string& path) const;
  static CsvTable read(std::istream& is);
};

/// Splits one CSV line on commas (no quoting is used by any emitted file).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace olab

#endif  // OLAB_IO_HPP
