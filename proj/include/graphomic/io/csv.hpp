#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "graphomic/numcore/matrix.hpp"

namespace graphomic::io {

/// Fixed notation with `decimals` digits, '.' separator, independent of locale.
std::string format_fixed(double value, int decimals);
/// Shortest text that parses back to the same double.
std::string format_shortest(double value);
/// Whole-string parse; throws DataError naming `context` on failure.
double parse_double(std::string_view text, std::string_view context = {});
long long parse_integer(std::string_view text, std::string_view context = {});

/// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
/// Joins fields, quoting any that contain ',', '"' or a newline.
std::string join_csv(const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// 1-based source line of each row.
  std::vector<std::size_t> line_numbers;
};

/// Reads a headed CSV. Rows whose field count differs from the header raise
/// DataError with the file name and line number. Blank lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

/// Writes '\n'-terminated records.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// id column followed by one column per matrix column, values in shortest form.
void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const std::vector<std::string>& column_names, const Matrix& values);

}  // namespace graphomic::io
