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

#include "robustlimit/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "robustlimit/errors.hpp"

namespace robustlimit {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

Complex entry_from_json(const json& e, const std::string& path) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw Error(ErrorKind::ParseError, path + ": expected [re, im] pair or real number");
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::ParseError, path + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw Error(ErrorKind::ParseError, path + "[0]: expected a non-empty row");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::ParseError, row_path + ": ragged matrix row");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = entry_from_json(row[static_cast<std::size_t>(c)],
                                row_path + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

ComplexMatrix load_matrix_file(const std::string& path) {
  const json doc = read_json_file(path);
  if (doc.is_object()) {
    if (!doc.contains("matrix")) {
      throw Error(ErrorKind::ParseError, path + ": missing field 'matrix'");
    }
    return matrix_from_json(doc.at("matrix"), "matrix");
  }
  return matrix_from_json(doc, "matrix");
}

void save_matrix_file(const ComplexMatrix& m, const std::string& path) {
  write_json_file(json{{"matrix", matrix_to_json(m)}}, path);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != header_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "CSV row width does not match header");
  }
  rows_.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const CsvCell& cell) {
  if (const auto* s = std::get_if<std::string>(&cell)) return quote(*s);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::to_string(std::get<long long>(cell));
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
  auto line = [&out](const auto& cells, auto&& fmt) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << fmt(cells[i]);
    }
    out << "\r\n";
  };
  line(header_, [](const std::string& h) { return quote(h); });
  for (const auto& row : rows_) line(row, render);
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  write(out);
}

std::string CsvTable::str() const {
  std::ostringstream ss;
  write(ss);
  return ss.str();
}

}  // namespace robustlimit
