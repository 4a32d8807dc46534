#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fastmi::csv {

struct Row {
  std::size_t line = 0;  // 1-based line the record started on
  std::vector<std::string> cells;
};

struct Table {
  bool has_header = false;
  std::vector<std::string> header;  // empty when has_header is false
  std::vector<Row> rows;            // data records only
};

// RFC-4180-style parsing: comma separators, optional CRLF, double-quoted
// fields with "" escapes (which may span lines).  The first record is taken
// as a header when at least one of its cells is not numeric.  Structural
// problems raise ParseError with 1-based line and column positions.
Table parse(std::string_view text);
Table read_file(const std::string &path);  // IoError on filesystem problems

// Accepts a header name or a 0-based index; ConfigError when unresolvable.
std::size_t resolve_column(const Table &table, const std::string &spec);

// Cell values of one column as doubles.  A missing or non-numeric cell
// raises ParseError naming the offending line.
std::vector<double> numeric_column(const Table &table, std::size_t column);

// One column as raw strings (for grouping labels).
std::vector<std::string> string_column(const Table &table, std::size_t column);

// Writing: quoting applied only where required; doubles are rendered in
// shortest round-trip form so written samples re-read bit-identically.
std::string format_double(double value);
std::string quote_if_needed(const std::string &cell);
void write_file(const std::string &path, const Table &table);

}  // namespace fastmi::csv
