#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qlbm {

/// One coordinate-format entry.
struct Triplet {
  std::int64_t row;
  std::int64_t col;
  double value;
};

/// Row-compressed real sparse matrix. Entries are unique per (row, col),
/// finite and nonzero.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::int64_t nrows, std::int64_t ncols, std::vector<Triplet> entries);

  static SparseMatrix identity(std::int64_t n);

  std::int64_t nrows() const { return nrows_; }
  std::int64_t ncols() const { return ncols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_.size()); }

  std::span<const std::int64_t> row_ptr() const { return row_ptr_; }
  std::span<const std::int64_t> cols() const { return col_; }
  std::span<const double> values() const { return val_; }

  /// y = A x
  void matvec(std::span<const double> x, std::span<double> y) const;
  std::vector<double> matvec(std::span<const double> x) const;

  SparseMatrix transposed() const;

  /// alpha*A + beta*I (square only).
  SparseMatrix scaled_plus_identity(double alpha, double beta) const;

  double at(std::int64_t row, std::int64_t col) const;
  std::vector<std::vector<double>> to_dense() const;

  double max_abs_diff(const SparseMatrix& other) const;

  /// Matrix Market coordinate text, 1-based indices.
  void write_matrix_market(std::ostream& os) const;
  void write_matrix_market_file(const std::string& path) const;

 private:
  std::int64_t nrows_ = 0;
  std::int64_t ncols_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int64_t> col_;
  std::vector<double> val_;
};

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace qlbm
