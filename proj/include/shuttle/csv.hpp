#ifndef SHUTTLE_CSV_HPP
#define SHUTTLE_CSV_HPP

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace shuttle {

// Writes a CSV with 17-significant-digit values so that read-back is
// bit-exact.  Comment lines, if any, are emitted first, prefixed by '#'.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const Eigen::MatrixXd& data,
               const std::vector<std::string>& comments = {});

struct CsvTable {
  std::vector<std::string> columns;
  Eigen::MatrixXd data;
};

// Reads a CSV produced by write_csv; '#' lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace shuttle

#endif
