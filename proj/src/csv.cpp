#include "fastmi/csv.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fastmi/errors.hpp"

namespace fastmi::csv {

namespace {

bool parse_double(std::string_view text, double &out) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (begin == end) {
    return false;
  }
  // from_chars accepts '-' but not an explicit '+'; strip one, but never
  // expose a second sign character ("+-3" stays non-numeric).
  if (text[begin] == '+' && begin + 1 < end && text[begin + 1] != '-' &&
      text[begin + 1] != '+') {
    ++begin;
  }
  const char *first = text.data() + begin;
  const char *last = text.data() + end;
  const auto result = std::from_chars(first, last, out);
  return result.ec == std::errc() && result.ptr == last;
}

bool numeric_cell(const std::string &cell) {
  double ignored;
  return parse_double(cell, ignored);
}

}  // namespace

Table parse(std::string_view text) {
  std::vector<Row> records;
  Row current;
  std::string cell;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  bool cell_was_quoted = false;
  bool any_content = false;  // current record has at least one char or comma

  auto finish_cell = [&]() {
    current.cells.push_back(std::move(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  auto finish_record = [&]() {
    finish_cell();
    current.line = record_line;
    records.push_back(std::move(current));
    current = Row{};
    any_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
        }
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!cell.empty() || cell_was_quoted) {
          throw ParseError("quote inside an unquoted field", line,
                           current.cells.size() + 1);
        }
        if (!any_content) {
          record_line = line;
        }
        in_quotes = true;
        cell_was_quoted = true;
        any_content = true;
        break;
      case ',':
        if (!any_content) {
          record_line = line;
        }
        any_content = true;
        finish_cell();
        break;
      case '\r':
        break;  // swallowed; the following \n ends the record
      case '\n':
        if (any_content) {
          finish_record();
        }
        ++line;
        break;
      default:
        if (!any_content) {
          record_line = line;
        }
        any_content = true;
        cell.push_back(c);
        break;
    }
  }
  if (in_quotes) {
    throw ParseError("unterminated quoted field", record_line,
                     current.cells.size() + 1);
  }
  if (any_content) {
    finish_record();
  }

  Table table;
  if (records.empty()) {
    return table;
  }
  bool header = false;
  for (const std::string &c : records.front().cells) {
    if (!numeric_cell(c)) {
      header = true;
      break;
    }
  }
  std::size_t first_data = 0;
  if (header) {
    table.has_header = true;
    table.header = records.front().cells;
    first_data = 1;
  }
  table.rows.assign(records.begin() + static_cast<std::ptrdiff_t>(first_data),
                    records.end());
  return table;
}

Table read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure on '" + path + "'");
  }
  return parse(buffer.str());
}

std::size_t resolve_column(const Table &table, const std::string &spec) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == spec) {
      return i;
    }
  }
  std::size_t index = 0;
  const auto result =
      std::from_chars(spec.data(), spec.data() + spec.size(), index);
  if (result.ec == std::errc() && result.ptr == spec.data() + spec.size()) {
    return index;
  }
  if (table.has_header) {
    std::string names;
    for (const std::string &h : table.header) {
      names += names.empty() ? "'" + h + "'" : ", '" + h + "'";
    }
    throw ConfigError("column '" + spec + "' not found; file has " + names);
  }
  throw ConfigError("column '" + spec +
                    "' is not a 0-based index and the file has no header");
}

std::vector<double> numeric_column(const Table &table, std::size_t column) {
  std::vector<double> values;
  values.reserve(table.rows.size());
  for (const Row &row : table.rows) {
    if (column >= row.cells.size()) {
      throw ParseError("row has only " + std::to_string(row.cells.size()) +
                           " columns, need index " + std::to_string(column),
                       row.line, column + 1);
    }
    double v = 0.0;
    if (!parse_double(row.cells[column], v)) {
      throw ParseError("non-numeric cell '" + row.cells[column] + "'", row.line,
                       column + 1);
    }
    values.push_back(v);
  }
  return values;
}

std::vector<std::string> string_column(const Table &table, std::size_t column) {
  std::vector<std::string> values;
  values.reserve(table.rows.size());
  for (const Row &row : table.rows) {
    if (column >= row.cells.size()) {
      throw ParseError("row has only " + std::to_string(row.cells.size()) +
                           " columns, need index " + std::to_string(column),
                       row.line, column + 1);
    }
    values.push_back(row.cells[column]);
  }
  return values;
}

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string quote_if_needed(const std::string &cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) {
    return cell;
  }
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') {
      quoted += "\"\"";
    } else {
      quoted.push_back(c);
    }
  }
  quoted.push_back('"');
  return quoted;
}

void write_file(const std::string &path, const Table &table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  auto write_row = [&out](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) {
        out << ',';
      }
      out << quote_if_needed(cells[i]);
    }
    out << '\n';
  };
  if (table.has_header) {
    write_row(table.header);
  }
  for (const Row &row : table.rows) {
    write_row(row.cells);
  }
  if (!out) {
    throw IoError("write failure on '" + path + "'");
  }
}

}  // namespace fastmi::csv
