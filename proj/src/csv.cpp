#include "shuttle/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shuttle {

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const Eigen::MatrixXd& data,
               const std::vector<std::string>& comments) {
  if (columns.size() != static_cast<size_t>(data.cols()))
    throw std::invalid_argument("column count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (const auto& c : comments) out << "# " << c << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", data(r, c));
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      size_t pos = 0;
      row.push_back(std::stod(cell, &pos));
    }
    if (row.size() != table.columns.size())
      throw std::runtime_error("malformed CSV row in " + path.string());
    rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("missing CSV header in " + path.string());
  table.data.resize(rows.size(), table.columns.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < table.columns.size(); ++c)
      table.data(r, c) = rows[r][c];
  return table;
}

}  // namespace shuttle
