#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Minimal RFC-4180 reader/writer: comma separator, double-quote quoting,
// embedded quotes doubled, embedded newlines allowed inside quotes.
namespace setsum::csv {

struct Record {
  std::size_t line = 0;  // 1-based physical line where the record starts
  std::vector<std::string> fields;
};

/// Reads every record. Blank lines are skipped; a leading UTF-8 BOM is
/// dropped. Throws Error(MalformedRow) on an unterminated quoted field.
std::vector<Record> read(std::istream& in);

std::string quote(std::string_view field);

void write_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace setsum::csv
