#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gmc::csv {

/// Parses comma-separated numeric rows. Blank lines are skipped; a
/// non-numeric first line is treated as a header and skipped. Throws
/// std::runtime_error on malformed numbers.
std::vector<std::vector<double>> read_numeric(std::istream& in);

/// Splits one CSV line on commas (no quoting).
std::vector<std::string> split(const std::string& line);

/// Shortest-form text with 9 significant digits ("%.9g").
std::string format(double value);

/// The value a reader gets back after format(); used so in-memory data
/// matches what is written to disk.
double quantize(double value);

}  // namespace gmc::csv
