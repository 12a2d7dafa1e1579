#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "bclust/metric.hpp"

namespace bclust::io {

enum class InputFormat { csv_points, json_points, csv_matrix };

InputFormat parse_format(std::string_view name);
std::string_view to_string(InputFormat format);

/// One point per row, comma-separated. With `header`, the first line is
/// skipped. Blank lines are ignored. Errors carry 1-based row/column.
PointSet read_points_csv(std::istream& in, bool header = false);

/// A JSON array of equal-length arrays of numbers.
PointSet read_points_json(std::istream& in);

/// n x n comma-separated distance matrix.
DistanceOracle read_matrix_csv(std::istream& in, bool header = false);

DistanceOracle load(const std::filesystem::path& path, InputFormat format,
                    bool header = false);

void write_points_csv(std::ostream& out, const PointSet& points);

}  // namespace bclust::io
