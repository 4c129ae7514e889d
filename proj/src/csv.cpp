// SPDX-License-Identifier: MIT
#include "mbrh/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "mbrh/common.hpp"

namespace mbrh {

CsvWriter::CsvWriter(const std::string& path, const std::string& kind, std::vector<std::string> columns)
    : path_(path), out_(path), ncol_(columns.size()) {
  if (!out_) throw IoError("cannot create '" + path + "'");
  out_ << "# mbrh-csv v" << kCsvVersion << ' ' << kind << '\n';
  for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncol_) throw PreconditionError("csv row width mismatch in '" + path_ + "'");
  char buf[40];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    if (i) out_ << ',';
    out_ << buf;
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw IoError("write failed for '" + path_ + "'");
  out_.close();
}

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  throw IoError("csv column '" + name + "' missing");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# mbrh-csv v", 0) != 0)
    throw IoError("'" + path + "' lacks the mbrh-csv header comment");
  {
    std::istringstream hs(line.substr(12));
    hs >> t.version >> t.kind;
    if (t.version != kCsvVersion) throw IoError("'" + path + "' has unsupported csv version");
  }
  if (!std::getline(in, line)) throw IoError("'" + path + "' lacks a header row");
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) t.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> r;
    r.reserve(t.columns.size());
    const char* p = line.data();
    const char* end = p + line.size();
    while (p <= end) {
      const char* comma = std::find(p, end, ',');
      double v = 0;
      // from_chars rejects a leading '+', which the writer never emits.
      const auto res = std::from_chars(p, comma, v);
      if (res.ec != std::errc() || res.ptr != comma) {
        // nan/inf spellings from printf
        const std::string tok(p, comma);
        try {
          v = std::stod(tok);
        } catch (...) {
          throw IoError("'" + path + "': bad number '" + tok + "'");
        }
      }
      r.push_back(v);
      p = comma + 1;
    }
    if (r.size() != t.columns.size()) throw IoError("'" + path + "': row width mismatch");
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace mbrh
