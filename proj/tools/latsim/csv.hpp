#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace latsim::cli {

/// Number formatted with 12 significant digits, the CSV serialization rule.
std::string csv_number(double v);

/// UTF-8 CSV with a mandatory header row and LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void write_row(const std::vector<std::string>& cells);
  void close();  // throws on I/O failure; also called by the destructor (non-throwing)
  ~CsvWriter();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t n_columns_ = 0;
  bool closed_ = false;
};

}  // namespace latsim::cli
