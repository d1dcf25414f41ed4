// Copyright 2026 The robustlimit Authors
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

#pragma once

// Shared file formats: matrices as JSON (row-major nested arrays of [re, im]
// pairs) and RFC-4180 CSV with shortest round-trip number formatting.

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "robustlimit/matrix_core.hpp"

namespace robustlimit {

nlohmann::json matrix_to_json(const ComplexMatrix& m);
/// `path` names the field in error messages (e.g. "couplings[0].bath").
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& path);

/// Accepts either a bare matrix or {"matrix": ...}.
ComplexMatrix load_matrix_file(const std::string& path);
void save_matrix_file(const ComplexMatrix& m, const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

using CsvCell = std::variant<std::string, double, long long>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<CsvCell> row);
  std::size_t size() const { return rows_.size(); }

  void write(std::ostream& out) const;
  void write_file(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

}  // namespace robustlimit
