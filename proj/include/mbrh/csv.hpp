// Versioned numeric CSV files: a comment line "# mbrh-csv v<N> <kind>", a
// header row, then comma-separated rows. Complex values occupy two columns.
// SPDX-License-Identifier: MIT
#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace mbrh {

inline constexpr int kCsvVersion = 1;

class CsvWriter {
 public:
  // Throws IoError when the file cannot be created.
  CsvWriter(const std::string& path, const std::string& kind, std::vector<std::string> columns);
  void row(const std::vector<double>& values);
  // Flushes and checks the stream; throws IoError on failure.
  void close();

 private:
  std::string path_;
  std::ofstream out_;
  size_t ncol_;
};

struct CsvTable {
  std::string kind;
  int version = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Index of a column; throws IoError when absent.
  int column(const std::string& name) const;
};

// Throws IoError when missing or malformed.
CsvTable read_csv(const std::string& path);

}  // namespace mbrh
