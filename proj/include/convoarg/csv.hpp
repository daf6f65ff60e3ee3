#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <vector>

namespace convoarg::csv {

/// Quote a field iff it contains a comma, quote, or newline.
std::string escape(const std::string& field);

std::string join_row(const std::vector<std::string>& fields);

/// Split one CSV record (RFC-4180 quoting). The record must not contain an
/// unterminated quote.
std::vector<std::string> split_row(const std::string& line);

/// Shortest round-trip decimal form, same on every run.
std::string format_double(double v);

double parse_double(const std::string& s);
std::int64_t parse_int(const std::string& s);

}  // namespace convoarg::csv
