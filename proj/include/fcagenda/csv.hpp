#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fcagenda {

using CsvRow = std::vector<std::string>;

// RFC-4180 reader: comma separated, double-quote quoting with "" escapes,
// CRLF or LF line ends. Blank lines are skipped. Throws FormatError on an
// unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text);

// Quotes the field only when it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

}  // namespace fcagenda
