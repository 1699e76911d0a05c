#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace roadtrack::io {

struct CsvTable {
  std::string origin;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row
};

/// Comma separated, no quoting. The first non-empty line is the header.
CsvTable parse_csv(std::string_view text, const std::string& origin, bool has_header = true);
CsvTable read_csv(const std::string& path, bool has_header = true);

/// Throws SchemaMismatch.
void expect_header(const CsvTable& t, const std::vector<std::string>& header);

/// Field accessors; ParseError names origin, line and column.
double field_double(const CsvTable& t, std::size_t row, std::size_t col);
std::int64_t field_int(const CsvTable& t, std::size_t row, std::size_t col);
const std::string& field(const CsvTable& t, std::size_t row, std::size_t col);
[[noreturn]] void fail_row(const CsvTable& t, std::size_t row, const std::string& what);

std::string fmt_g6(double v);     // 6 significant digits
std::string fmt_stamp(double v);  // 2 decimals
std::string fmt_exact(double v);  // shortest form that reads back to the same double

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace roadtrack::io
