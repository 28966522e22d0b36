#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mriofp {

/// One parsed line of a delimited file, with its 1-based line number.
struct DelimitedRow {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

/// Reads a delimited text file. Double-quoted fields may contain the
/// delimiter ("" escapes a quote). Blank lines are skipped. Throws Io.
std::vector<DelimitedRow> read_delimited(const std::filesystem::path& path, char delimiter);
std::vector<DelimitedRow> parse_delimited(std::istream& in, char delimiter);

/// Decimal with optional exponent; surrounding blanks ignored. Throws ParseError
/// naming `where` when the cell is not a finite number.
double parse_number(std::string_view cell, const std::string& where);

/// Shortest text that is guaranteed to round-trip: 17 significant digits.
std::string format_number(double value);

/// Quotes `cell` when it contains the delimiter, a quote, or a newline.
std::string quote_cell(std::string_view cell, char delimiter);
void write_row(std::ostream& out, const std::vector<std::string>& cells, char delimiter);

}  // namespace mriofp
