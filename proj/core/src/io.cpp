#include "qlbm/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace qlbm {

struct CsvWriter::Impl {
  std::ofstream os;
  size_t columns;
};

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header)
    : impl_(new Impl) {
  impl_->os.open(path);
  if (!impl_->os) {
    delete impl_;
    throw std::runtime_error("cannot open " + path);
  }
  impl_->columns = header.size();
  for (size_t i = 0; i < header.size(); ++i) impl_->os << (i ? "," : "") << header[i];
  impl_->os << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != impl_->columns) throw std::invalid_argument("CsvWriter: column mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    impl_->os << (i ? "," : "") << format_double(values[i]);
  impl_->os << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != impl_->columns) throw std::invalid_argument("CsvWriter: column mismatch");
  for (size_t i = 0; i < cells.size(); ++i) impl_->os << (i ? "," : "") << cells[i];
  impl_->os << "\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vector_csv(const std::string& path, const std::vector<double>& v) {
  CsvWriter w(path, {"index", "value"});
  for (size_t i = 0; i < v.size(); ++i)
    w.row_mixed({std::to_string(i), format_double(v[i])});
}

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " + ec.message());
}

}  // namespace qlbm
