#include "graphomic/io/csv.hpp"

#include <charconv>
#include <fstream>

#include "graphomic/errors.hpp"

namespace graphomic::io {

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (res.ec != std::errc()) throw NumericError("cannot format value");
  std::string out(buf, res.ptr);
  if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string format_shortest(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc()) throw NumericError("cannot format value");
  return {buf, res.ptr};
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string where(std::string_view context) {
  return context.empty() ? std::string() : " (" + std::string(context) + ")";
}

}  // namespace

double parse_double(std::string_view text, std::string_view context) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DataError("not a number: '" + std::string(text) + "'" + where(context));
  }
  return v;
}

long long parse_integer(std::string_view text, std::string_view context) {
  text = trim(text);
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DataError("not an integer: '" + std::string(text) + "'" + where(context));
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw DataError(path.string() + ": empty file");
  return table;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << join_csv(header) << '\n';
  for (const auto& r : rows) out << join_csv(r) << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                      const std::vector<std::string>& column_names, const Matrix& values) {
  if (static_cast<Index>(ids.size()) != values.rows() ||
      static_cast<Index>(column_names.size()) != values.cols()) {
    throw DimensionError("matrix CSV: " + std::to_string(ids.size()) + " ids, " +
                         std::to_string(column_names.size()) + " names for " +
                         shape_string(values));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  std::vector<std::string> header{"id"};
  header.insert(header.end(), column_names.begin(), column_names.end());
  out << join_csv(header) << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    out << join_csv({ids[static_cast<std::size_t>(i)]});
    for (Index j = 0; j < values.cols(); ++j) out << ',' << format_shortest(values(i, j));
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace graphomic::io
