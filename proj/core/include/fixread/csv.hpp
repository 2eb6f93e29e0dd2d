#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace fixread {

// CSV writer used for every artifact the pipeline emits. The first line is
// a provenance comment carrying the tool version and the run seed; readers
// (and the determinism checks) skip lines starting with '#'.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::uint64_t seed);
  ~CsvWriter();

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);
  void raw_line(const std::string& line);

 private:
  std::ofstream out_;
};

// Minimal field splitter; no quoting (none of our artifacts need it).
std::vector<std::string> split_csv_line(const std::string& line);

// Reads a CSV skipping comment lines; returns rows of fields.
std::vector<std::vector<std::string>> read_csv(const std::string& path);

std::string format_double(double v, int decimals);

// "mean ± sd" cell, the table rendering used by the report tables.
std::string format_mean_sd(double mean, double sd, int decimals);

}  // namespace fixread
