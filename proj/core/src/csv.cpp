#include "monoevo/csv.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

#include "monoevo/error.hpp"

namespace monoevo {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw Error(fmt::format("csv row has {} cells, header has {}", row.size(), header.size()));
  rows.push_back(std::move(row));
}

std::ptrdiff_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
  return -1;
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << join(table.header) << '\n';
  for (const auto& r : table.rows) out << join(r) << '\n';
  out.flush();
  if (!out) throw Error(fmt::format("write failed for {}", path.string()));
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read {}", path.string()));
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(fmt::format("{} is empty", path.string()));
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size())
      throw Error(fmt::format("{}: row with {} cells under a {}-column header", path.string(),
                              cells.size(), t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace monoevo
