#include "trustgate/csv.hpp"

#include "trustgate/error.hpp"

namespace trustgate {
namespace {

[[noreturn]] void csv_error(std::size_t line, const std::string& message) {
  throw Error(ErrorKind::ParseError, "CSV line " + std::to_string(line) + ": " + message,
              Json{{"line", line}});
}

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line; skip it.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) csv_error(line, "quote inside unquoted field");
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        if (field_was_quoted) csv_error(line, "characters after closing quote");
        field += c;
    }
  }
  if (in_quotes) csv_error(record_line, "unterminated quoted field");
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();

  if (records.empty()) throw Error(ErrorKind::ParseError, "CSV input has no header row");

  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw Error(ErrorKind::ParseError,
                  "CSV record " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                      " fields, header has " + std::to_string(table.header.size()),
                  Json{{"record", r}});
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  auto emit_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (needs_quoting(row[i])) {
        out += '"';
        for (char c : row[i]) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      } else {
        out += row[i];
      }
    }
    out += "\r\n";
  };
  emit_row(table.header);
  for (const auto& row : table.rows) emit_row(row);
  return out;
}

}  // namespace trustgate
