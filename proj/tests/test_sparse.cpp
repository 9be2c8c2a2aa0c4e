#include "doctest.h"
#include <stdexcept>
#include "qlbm/sparse.hpp"

#include <sstream>

using namespace qlbm;

TEST_CASE("sparse matrix basics") {
  SparseMatrix m(2, 3, {{0, 1, 2.0}, {1, 0, -1.0}, {1, 2, 0.5}});
  CHECK(m.nnz() == 3);
  CHECK(m.at(0, 1) == 2.0);
  CHECK(m.at(0, 0) == 0.0);
  std::vector<double> y = m.matvec(std::vector<double>{1.0, 2.0, 4.0});
  CHECK(y[0] == 4.0);
  CHECK(y[1] == 1.0);

  SparseMatrix mt = m.transposed();
  CHECK(mt.nrows() == 3);
  CHECK(mt.at(1, 0) == 2.0);

  CHECK_THROWS_AS(SparseMatrix(2, 2, {{0, 0, 1.0}, {0, 0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(SparseMatrix(2, 2, {{0, 5, 1.0}}), std::invalid_argument);
}

TEST_CASE("zero entries are dropped") {
  SparseMatrix m(2, 2, {{0, 0, 0.0}, {1, 1, 3.0}});
  CHECK(m.nnz() == 1);
}

TEST_CASE("scaled plus identity") {
  SparseMatrix a(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}});
  SparseMatrix b = a.scaled_plus_identity(0.5, 0.25);
  CHECK(b.at(0, 0) == doctest::Approx(1.25));
  CHECK(b.at(0, 1) == doctest::Approx(0.5));
  CHECK(b.at(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("max_abs_diff over mismatched sparsity") {
  SparseMatrix a(2, 2, {{0, 0, 1.0}, {1, 1, 2.0}});
  SparseMatrix b(2, 2, {{0, 0, 1.0}, {0, 1, 0.125}});
  CHECK(a.max_abs_diff(b) == doctest::Approx(2.0));
  CHECK(a.max_abs_diff(a) == 0.0);
}

TEST_CASE("matrix market format") {
  SparseMatrix m(2, 2, {{0, 1, 0.5}});
  std::ostringstream os;
  m.write_matrix_market(os);
  CHECK(os.str() == "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 0.5\n");
}
