#include "bclust/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bclust/errors.hpp"

namespace bclust::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  const std::string_view text = trim(cell);
  double value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "row " << row << ", column " << col << ": '" << text
        << "' is not a finite number";
    throw InputError(msg.str());
  }
  return value;
}

std::vector<std::vector<double>> read_rows(std::istream& in, bool header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (header && row == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> values;
    std::string_view rest(line);
    std::size_t col = 0;
    while (true) {
      ++col;
      const auto comma = rest.find(',');
      values.push_back(parse_cell(rest.substr(0, comma), row, col));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "row " << row << ": expected " << rows.front().size()
          << " columns, got " << values.size();
      throw InputError(msg.str());
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InputError("input contains no data rows");
  return rows;
}

}  // namespace

InputFormat parse_format(std::string_view name) {
  if (name == "csv-points") return InputFormat::csv_points;
  if (name == "json-points") return InputFormat::json_points;
  if (name == "csv-matrix") return InputFormat::csv_matrix;
  throw InputError("format: expected csv-points|json-points|csv-matrix, got '" +
                   std::string(name) + "'");
}

std::string_view to_string(InputFormat format) {
  switch (format) {
    case InputFormat::csv_points: return "csv-points";
    case InputFormat::json_points: return "json-points";
    case InputFormat::csv_matrix: return "csv-matrix";
  }
  return "unknown";
}

PointSet read_points_csv(std::istream& in, bool header) {
  const auto rows = read_rows(in, header);
  return PointSet::from_rows(rows);
}

PointSet read_points_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("json: ") + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw InputError("json: expected a non-empty array of points");
  std::vector<std::vector<double>> rows;
  rows.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& point = doc[i];
    if (!point.is_array()) {
      std::ostringstream msg;
      msg << "json: point " << i << " is not an array";
      throw InputError(msg.str());
    }
    std::vector<double> values;
    for (std::size_t j = 0; j < point.size(); ++j) {
      if (!point[j].is_number()) {
        std::ostringstream msg;
        msg << "json: point " << i << ", coordinate " << j << " is not a number";
        throw InputError(msg.str());
      }
      values.push_back(point[j].get<double>());
    }
    rows.push_back(std::move(values));
  }
  return PointSet::from_rows(rows);
}

DistanceOracle read_matrix_csv(std::istream& in, bool header) {
  const auto rows = read_rows(in, header);
  const std::size_t n = rows.size();
  if (rows.front().size() != n) {
    std::ostringstream msg;
    msg << "distance matrix: " << n << " rows but " << rows.front().size()
        << " columns";
    throw InputError(msg.str());
  }
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& r : rows) entries.insert(entries.end(), r.begin(), r.end());
  return DistanceOracle::matrix(n, std::move(entries));
}

DistanceOracle load(const std::filesystem::path& path, InputFormat format,
                    bool header) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input '" + path.string() + "'");
  try {
    switch (format) {
      case InputFormat::csv_points:
        return DistanceOracle::euclidean(read_points_csv(in, header));
      case InputFormat::json_points:
        return DistanceOracle::euclidean(read_points_json(in));
      case InputFormat::csv_matrix:
        return read_matrix_csv(in, header);
    }
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  throw InputError("unknown input format");
}

void write_points_csv(std::ostream& out, const PointSet& points) {
  const auto precision = out.precision();
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << p[j];
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace bclust::io
