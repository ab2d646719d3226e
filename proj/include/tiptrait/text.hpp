#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Locale-independent number handling and a small RFC-4180 CSV codec.

namespace tiptrait::text {

// Whole-token parses. Reject trailing junk, empty input, and non-finite values.
std::optional<double> parse_double(std::string_view token) noexcept;
std::optional<long long> parse_integer(std::string_view token) noexcept;

// Shortest representation that reads back to the same double.
std::string format_shortest(double value);
// printf-style %.*g, always with '.' as decimal point.
std::string format_significant(double value, int digits);

std::vector<std::string_view> split_whitespace(std::string_view line);
std::string_view trim(std::string_view s) noexcept;

struct CsvRow {
    std::size_t line = 0;  // 1-based physical line where the record starts
    std::vector<std::string> fields;
};

// Parses RFC-4180 text: quoted fields, doubled quotes, CRLF or LF endings,
// embedded newlines inside quotes. Blank lines are skipped.
// Throws tiptrait::ParseError on an unterminated quote.
std::vector<CsvRow> parse_csv(std::string_view text);

// Quotes a field only when it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace tiptrait::text
