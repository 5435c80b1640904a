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

#include "nvcool/io/manifest.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include "nvcool/constants.hpp"
#include "nvcool/error.hpp"

namespace nvcool::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), columns_(header.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary);
  if (!out_) throw Error("cannot write '" + path.string() + "'");
  row(header);
}

void CsvWriter::row(std::initializer_list<std::string> cells) {
  row(std::vector<std::string>(cells));
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw DimensionError("csv row has the wrong number of columns");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of(",\"\n") != std::string::npos) {
      throw InvalidArgument("csv cell contains a separator: " + cells[i]);
    }
    out_ << (i ? "," : "") << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error("write failed for '" + path_.string() + "'");
}

void CsvWriter::close() {
  out_.close();
  if (out_.fail()) throw Error("close failed for '" + path_.string() + "'");
}

Manifest::Manifest(std::string command, nlohmann::json config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Manifest::add_output(const std::filesystem::path& path) {
  outputs_.push_back(path.filename().string());
}

void Manifest::add_oracle(std::string name, bool passed, std::string detail) {
  oracles_.push_back({std::move(name), passed, std::move(detail)});
}

bool Manifest::all_passed() const noexcept {
  for (const auto& o : oracles_) {
    if (!o.passed) return false;
  }
  return true;
}

nlohmann::json Manifest::to_json() const {
  using nlohmann::json;
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

  json j;
  j["tool"] = "nvcool";
  j["version"] = kVersion;
  j["command"] = command_;
  j["timestamp"] = stamp;
  j["constants"] = {{"hbar_J_s", constants::hbar},
                    {"k_boltzmann_J_K", constants::k_boltzmann},
                    {"pi", constants::pi}};
  j["config"] = config_;
  j["results"] = results_;
  j["outputs"] = outputs_;
  json oracles = json::array();
  for (const auto& o : oracles_) {
    oracles.push_back({{"name", o.name}, {"passed", o.passed}, {"detail", o.detail}});
  }
  j["oracles"] = oracles;
  j["all_oracles_passed"] = all_passed();
  return j;
}

void Manifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << to_json().dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace nvcool::io
