#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace trustgate {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC-4180: comma separated, double-quote quoting with "" escapes, CRLF or LF
// line endings, header row required. Every row must match the header arity.
// A UTF-8 byte-order mark before the header is skipped.
CsvTable parse_csv(std::string_view text);

std::string format_csv(const CsvTable& table);

}  // namespace trustgate
