#include "qlbm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace qlbm {

SparseMatrix::SparseMatrix(std::int64_t nrows, std::int64_t ncols, std::vector<Triplet> entries)
    : nrows_(nrows), ncols_(ncols) {
  if (nrows < 0 || ncols < 0) throw std::invalid_argument("SparseMatrix: negative dimension");
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(static_cast<size_t>(nrows) + 1, 0);
  col_.reserve(entries.size());
  val_.reserve(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    const Triplet& t = entries[i];
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw std::invalid_argument("SparseMatrix: entry out of range");
    if (!std::isfinite(t.value)) throw std::invalid_argument("SparseMatrix: non-finite value");
    if (i > 0 && entries[i - 1].row == t.row && entries[i - 1].col == t.col)
      throw std::invalid_argument("SparseMatrix: duplicate (row, col)");
    if (t.value == 0.0) continue;
    ++row_ptr_[static_cast<size_t>(t.row) + 1];
    col_.push_back(t.col);
    val_.push_back(t.value);
  }
  for (size_t r = 0; r < static_cast<size_t>(nrows); ++r) row_ptr_[r + 1] += row_ptr_[r];
}

SparseMatrix SparseMatrix::identity(std::int64_t n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return SparseMatrix(n, n, std::move(t));
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
  if (static_cast<std::int64_t>(x.size()) != ncols_ || static_cast<std::int64_t>(y.size()) != nrows_)
    throw std::invalid_argument("matvec: dimension mismatch");
  for (std::int64_t r = 0; r < nrows_; ++r) {
    double acc = 0.0;
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) acc += val_[k] * x[col_[k]];
    y[r] = acc;
  }
}

std::vector<double> SparseMatrix::matvec(std::span<const double> x) const {
  std::vector<double> y(static_cast<size_t>(nrows_));
  matvec(x, y);
  return y;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> t;
  t.reserve(col_.size());
  for (std::int64_t r = 0; r < nrows_; ++r)
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({col_[k], r, val_[k]});
  return SparseMatrix(ncols_, nrows_, std::move(t));
}

SparseMatrix SparseMatrix::scaled_plus_identity(double alpha, double beta) const {
  if (nrows_ != ncols_) throw std::invalid_argument("scaled_plus_identity: square matrix required");
  std::vector<Triplet> t;
  t.reserve(col_.size() + static_cast<size_t>(nrows_));
  for (std::int64_t r = 0; r < nrows_; ++r) {
    bool diag_seen = false;
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      double v = alpha * val_[k];
      if (col_[k] == r) {
        v += beta;
        diag_seen = true;
      }
      t.push_back({r, col_[k], v});
    }
    if (!diag_seen && beta != 0.0) t.push_back({r, r, beta});
  }
  return SparseMatrix(nrows_, ncols_, std::move(t));
}

double SparseMatrix::at(std::int64_t row, std::int64_t col) const {
  for (std::int64_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k)
    if (col_[k] == col) return val_[k];
  return 0.0;
}

std::vector<std::vector<double>> SparseMatrix::to_dense() const {
  std::vector<std::vector<double>> d(static_cast<size_t>(nrows_),
                                     std::vector<double>(static_cast<size_t>(ncols_), 0.0));
  for (std::int64_t r = 0; r < nrows_; ++r)
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[static_cast<size_t>(r)][static_cast<size_t>(col_[k])] = val_[k];
  return d;
}

double SparseMatrix::max_abs_diff(const SparseMatrix& other) const {
  if (nrows_ != other.nrows_ || ncols_ != other.ncols_)
    throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::int64_t r = 0; r < nrows_; ++r) {
    std::int64_t ka = row_ptr_[r], kb = other.row_ptr_[r];
    const std::int64_t ea = row_ptr_[r + 1], eb = other.row_ptr_[r + 1];
    while (ka < ea || kb < eb) {
      std::int64_t ca = ka < ea ? col_[ka] : ncols_;
      std::int64_t cb = kb < eb ? other.col_[kb] : ncols_;
      double d;
      if (ca == cb) {
        d = val_[ka] - other.val_[kb];
        ++ka, ++kb;
      } else if (ca < cb) {
        d = val_[ka];
        ++ka;
      } else {
        d = -other.val_[kb];
        ++kb;
      }
      m = std::max(m, std::abs(d));
    }
  }
  return m;
}

void SparseMatrix::write_matrix_market(std::ostream& os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << nrows_ << " " << ncols_ << " " << nnz() << "\n";
  char buf[96];
  for (std::int64_t r = 0; r < nrows_; ++r)
    for (std::int64_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n", static_cast<long long>(r + 1),
                    static_cast<long long>(col_[k] + 1), val_[k]);
      os << buf;
    }
}

void SparseMatrix::write_matrix_market_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_matrix_market(os);
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace qlbm
