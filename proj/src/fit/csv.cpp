// Copyright 2026 The nvcool Authors
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

#include "nvcool/fit/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvcool/error.hpp"

namespace nvcool::fit {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

Series read_series(std::istream& in) {
  Series s;
  std::string line;
  int lineno = 0;
  std::size_t columns = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (lineno == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    const auto fields = split(view);
    std::vector<double> values;
    bool numeric = true;
    for (auto f : fields) {
      const auto v = parse_number(f);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (!numeric) {
      if (!seen_data && s.size() == 0 && columns == 0) {
        columns = fields.size();
        if (columns < 2 || columns > 3) {
          throw InvalidArgument("csv line " + std::to_string(lineno) +
                                ": header must have 2 or 3 columns");
        }
        seen_data = true;  // only one header line is allowed
        continue;
      }
      throw InvalidArgument("csv line " + std::to_string(lineno) + ": could not parse '" +
                            std::string(trim(view)) + "' as numbers");
    }
    if (values.size() < 2 || values.size() > 3) {
      throw InvalidArgument("csv line " + std::to_string(lineno) + ": expected 2 or 3 columns, got " +
                            std::to_string(values.size()));
    }
    if (columns == 0) columns = values.size();
    if (values.size() != columns) {
      throw InvalidArgument("csv line " + std::to_string(lineno) + ": expected " +
                            std::to_string(columns) + " columns, got " +
                            std::to_string(values.size()));
    }
    seen_data = true;
    s.x.push_back(values[0]);
    s.y.push_back(values[1]);
    if (columns == 3) s.sigma.push_back(values[2]);
  }
  if (s.size() == 0) throw InvalidArgument("csv: no data rows");
  s.validate();
  return s;
}

Series read_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("csv: cannot open " + path.string());
  return read_series(in);
}

}  // namespace nvcool::fit
