#include "fixread/csv.hpp"

#include <cmath>
#include <cstdio>

#include "fixread/errors.hpp"
#include "fixread/version.hpp"

namespace fixread {

CsvWriter::CsvWriter(const std::string& path, std::uint64_t seed) : out_(path) {
  if (!out_) {
    throw error("cannot open for writing: " + path);
  }
  out_ << "# fixread " << kVersion << " seed=" << seed << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::comment(const std::string& text) { out_ << "# " << text << "\n"; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

void CsvWriter::raw_line(const std::string& line) { out_ << line << "\n"; }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw error("cannot open: " + path);
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

std::string format_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_mean_sd(double mean, double sd, int decimals) {
  return format_double(mean, decimals) + " ± " + format_double(sd, decimals);
}

}  // namespace fixread
