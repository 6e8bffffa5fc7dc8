#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dwlab {

/// Numeric table with '#'-prefixed comment lines above a header row.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
  void add_row(std::vector<double> row);
};

/// Shortest round-tripping text for a double ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);
double parse_double(const std::string& text);

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

/// key=value tokens found in comment lines; later keys win.
std::map<std::string, std::string> comment_values(const CsvTable& table);

}  // namespace dwlab
