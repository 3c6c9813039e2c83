#include "gmc/csv.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <stdexcept>

namespace gmc::csv {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

}  // namespace

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::vector<std::vector<double>> read_numeric(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    bool ok = true;
    for (const auto& field : split(line)) {
      double v = 0.0;
      if (!parse_double(field, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (rows.empty() && line_no == 1) continue;  // header
      throw std::runtime_error("csv: malformed number on line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double quantize(double value) { return std::strtod(format(value).c_str(), nullptr); }

}  // namespace gmc::csv
