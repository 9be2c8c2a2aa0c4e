#pragma once

#include <string>
#include <vector>

namespace qlbm {

/// CSV with a fixed header row; floats at 17 significant digits so re-runs
/// are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(std::string path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);
void write_vector_csv(const std::string& path, const std::vector<double>& v);
void ensure_directory(const std::string& path);

}  // namespace qlbm
