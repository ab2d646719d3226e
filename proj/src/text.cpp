#include "tiptrait/text.hpp"

#include "tiptrait/core.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace tiptrait::text {

std::optional<double> parse_double(std::string_view token) noexcept
{
    if (token.empty()) {
        return std::nullopt;
    }
    // from_chars rejects a leading '+', which detector outputs occasionally carry.
    if (token.front() == '+') {
        token.remove_prefix(1);
        if (token.empty() || token.front() == '-' || token.front() == '+') {
            return std::nullopt;
        }
    }
    double value = 0.0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<long long> parse_integer(std::string_view token) noexcept
{
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    if (token.empty()) {
        return std::nullopt;
    }
    long long value = 0;
    const auto* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), last, value);
    if (ec != std::errc{} || ptr != last) {
        return std::nullopt;
    }
    return value;
}

std::string format_shortest(double value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), ptr};
}

std::string format_significant(double value, int digits)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::general, digits);
    return {buf.data(), ptr};
}

std::vector<std::string_view> split_whitespace(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        std::size_t start = i;
        while (i < line.size() && !is_space(line[i])) {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

std::string_view trim(std::string_view s) noexcept
{
    constexpr std::string_view ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<CsvRow> parse_csv(std::string_view text)
{
    std::vector<CsvRow> rows;
    std::size_t line = 1;
    std::size_t i = 0;

    // UTF-8 BOM
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        i = 3;
    }

    while (i < text.size()) {
        CsvRow row;
        row.line = line;
        std::string field;
        bool any_content = false;

        for (;;) {
            if (i < text.size() && text[i] == '"') {
                any_content = true;
                const std::size_t quote_line = line;
                ++i;
                for (;;) {
                    if (i >= text.size()) {
                        throw ParseError(quote_line, "unterminated quoted field");
                    }
                    const char c = text[i++];
                    if (c == '"') {
                        if (i < text.size() && text[i] == '"') {
                            field.push_back('"');
                            ++i;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n') {
                            ++line;
                        }
                        field.push_back(c);
                    }
                }
                // Anything between the closing quote and the delimiter is kept verbatim.
                while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    field.push_back(text[i++]);
                }
            } else {
                while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    field.push_back(text[i++]);
                    any_content = true;
                }
            }

            row.fields.push_back(std::move(field));
            field.clear();

            if (i < text.size() && text[i] == ',') {
                any_content = true;
                ++i;
                continue;
            }
            // end of record
            if (i < text.size() && text[i] == '\r') {
                ++i;
            }
            if (i < text.size() && text[i] == '\n') {
                ++i;
            }
            ++line;
            break;
        }

        if (any_content) {
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string csv_line(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out.push_back(',');
        }
        out += csv_escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

}  // namespace tiptrait::text
