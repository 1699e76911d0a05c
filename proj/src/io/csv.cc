#include "roadtrack/io/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "roadtrack/core/error.hpp"

namespace roadtrack::io {

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    std::string_view cell = line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
    out.emplace_back(cell);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

CsvTable parse_csv(std::string_view text, const std::string& origin, bool has_header) {
  CsvTable t;
  t.origin = origin;
  int line_no = 0;
  std::size_t pos = 0;
  bool header_seen = !has_header;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    auto cells = split_line(line);
    if (!header_seen) {
      t.header = std::move(cells);
      header_seen = true;
      continue;
    }
    if (has_header && cells.size() != t.header.size()) {
      fail(ErrorKind::kParseError, fmt::format("{}:{}: expected {} fields, got {}", origin, line_no,
                                               t.header.size(), cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.line_numbers.push_back(line_no);
  }
  return t;
}

CsvTable read_csv(const std::string& path, bool has_header) {
  return parse_csv(read_text_file(path), path, has_header);
}

void expect_header(const CsvTable& t, const std::vector<std::string>& header) {
  if (t.header != header) {
    std::string want, got;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
    fail(ErrorKind::kSchemaMismatch, fmt::format("{}: header '{}' does not match expected '{}'", t.origin,
                                                 got, want));
  }
}

void fail_row(const CsvTable& t, std::size_t row, const std::string& what) {
  fail(ErrorKind::kParseError, fmt::format("{}:{}: {}", t.origin, t.line_numbers[row], what));
}

const std::string& field(const CsvTable& t, std::size_t row, std::size_t col) {
  if (col >= t.rows[row].size()) fail_row(t, row, fmt::format("missing column {}", col + 1));
  return t.rows[row][col];
}

double field_double(const CsvTable& t, std::size_t row, std::size_t col) {
  const std::string& s = field(t, row, col);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail_row(t, row, fmt::format("column {}: '{}' is not a number", col + 1, s));
  }
  return v;
}

std::int64_t field_int(const CsvTable& t, std::size_t row, std::size_t col) {
  const std::string& s = field(t, row, col);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail_row(t, row, fmt::format("column {}: '{}' is not an integer", col + 1, s));
  }
  return v;
}

std::string fmt_g6(double v) { return fmt::format("{:.6g}", v); }

std::string fmt_stamp(double v) { return fmt::format("{:.2f}", v); }

std::string fmt_exact(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kParseError, fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::kValidationError, fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) fail(ErrorKind::kValidationError, fmt::format("write to '{}' failed", path));
}

}  // namespace roadtrack::io
