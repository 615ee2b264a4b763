// Copyright 2026 The AIRPF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AIRPF_CSV_HPP
#define AIRPF_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "airpf/series.hpp"

namespace airpf {

/// 17 significant digits, locale independent.
std::string format_double(double value);

/// Shortest representation that round-trips.
std::string format_shortest(double value);

/// Parses a whole field as a double; throws ShapeError on junk.
double parse_double(std::string_view field);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string_view> split_csv_line(std::string_view line);

/// One row per series row, dim columns, no header.
void write_series_csv(std::ostream& out, const Series& series);
Series read_series_csv(std::istream& in);

void write_series_csv_file(const std::string& path, const Series& series);
Series read_series_csv_file(const std::string& path);

}  // namespace airpf

#endif  // AIRPF_CSV_HPP
