#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace monoevo {

/// Plain comma-separated table; cells never contain commas or quotes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::ptrdiff_t column(const std::string& name) const;  // -1 if absent
};

/// 17 significant digits, so values round-trip.
std::string format_real(double x);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace monoevo
