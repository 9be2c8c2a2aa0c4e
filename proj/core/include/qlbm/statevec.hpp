#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qlbm/circuit.hpp"
#include "qlbm/sparse.hpp"

namespace qlbm {

inline constexpr int kMaxSimQubits = 24;

/// Applies the circuit's gates in order to a dense amplitude vector of
/// length 2^{num_qubits}. All gate matrices are real, so a real-amplitude
/// fast path is exact; the complex overload exists for cross-checking.
void apply(const Circuit& c, std::vector<double>& amps);
void apply(const Circuit& c, std::vector<std::complex<double>>& amps);

struct DenseBlock {
  std::int64_t nrows = 0;
  std::int64_t ncols = 0;
  std::vector<double> data;  // row-major
  double& at(std::int64_t r, std::int64_t col) { return data[r * ncols + col]; }
  double at(std::int64_t r, std::int64_t col) const { return data[r * ncols + col]; }
};

/// Column evaluation strategy for extract_block. Basis columns keep a sparse
/// support (each H gate at most doubles it), so the sparse walker is the
/// default; the dense path exists as the cross-check.
enum class ExtractMethod { Sparse, Dense };

/// Projects the circuit onto the ancilla |0...0> block: column j is the
/// system-register image of basis state j. Columns run in parallel across up
/// to QLBM_THREADS workers.
DenseBlock extract_block(const Circuit& c, ExtractMethod method = ExtractMethod::Sparse);

struct VerifyReport {
  double max_abs_err = 0.0;
  std::int64_t worst_row = -1;
  std::int64_t worst_col = -1;
  bool pass = false;
  double tol = 0.0;
};

/// Entrywise comparison of extract_block(c) against target/alpha.
VerifyReport verify(const Circuit& c, const SparseMatrix& target, double alpha, double tol);

/// Parallelism cap from the QLBM_THREADS environment variable.
int thread_cap();

}  // namespace qlbm
