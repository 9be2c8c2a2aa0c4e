#include "qlbm/timesystem.hpp"

#include <cmath>
#include <stdexcept>

namespace qlbm {

GlobalSystem assemble(const SparseMatrix& a_tilde, const std::vector<double>& b,
                      const std::vector<double>& y0, int nt, int w_idle, double h,
                      IndexMode mode) {
  const std::int64_t d = a_tilde.nrows();
  if (a_tilde.ncols() != d || static_cast<std::int64_t>(b.size()) != d ||
      static_cast<std::int64_t>(y0.size()) != d)
    throw std::invalid_argument("assemble: dimension mismatch");
  if (nt < 1 || w_idle < 0) throw std::invalid_argument("assemble: nt >= 1 and W >= 0 required");

  GlobalSystem sys;
  sys.a_tilde = a_tilde;
  sys.a_tilde_t = a_tilde.transposed();
  sys.b = b;
  sys.y0 = y0;
  sys.d_c = d;
  sys.nt = nt;
  sys.w_idle = w_idle;
  sys.h = h;
  sys.mode = mode;
  sys.num_blocks = (std::int64_t(1) << w_idle) * nt;

  const std::int64_t dim = sys.dim();
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(dim) + static_cast<size_t>(nt) * a_tilde.nnz());
  for (std::int64_t i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
  auto rp = a_tilde.row_ptr();
  auto cols = a_tilde.cols();
  auto vals = a_tilde.values();
  for (std::int64_t blk = 1; blk < sys.num_blocks; ++blk) {
    const std::int64_t ro = blk * d, co = (blk - 1) * d;
    if (blk <= nt) {
      for (std::int64_t r = 0; r < d; ++r)
        for (std::int64_t k = rp[r]; k < rp[r + 1]; ++k)
          t.push_back({ro + r, co + cols[k], -vals[k]});
    } else {
      for (std::int64_t r = 0; r < d; ++r) t.push_back({ro + r, co + r, -1.0});
    }
  }
  sys.l = SparseMatrix(dim, dim, std::move(t));
  sys.l_t = sys.l.transposed();

  sys.b_l.assign(static_cast<size_t>(dim), 0.0);
  for (std::int64_t i = 0; i < d; ++i) sys.b_l[i] = y0[i];
  for (std::int64_t blk = 1; blk <= std::min<std::int64_t>(nt, sys.num_blocks - 1); ++blk)
    for (std::int64_t i = 0; i < d; ++i) sys.b_l[blk * d + i] = h * b[i];
  return sys;
}

GlobalSystem assemble_system(const Geometry& geom, const FlowParams& params, IndexMode mode) {
  SparseMatrix a = build_A(geom, params, mode);
  SparseMatrix at = interpolate(a, params.h);
  std::vector<double> b = build_forcing(geom, params, mode);
  std::vector<double> y0 = field_to_vector(rest_state(geom));
  if (mode == IndexMode::Padded) y0 = embed_padded(geom, y0);
  return assemble(at, b, y0, params.nt, params.w_idle, params.h, mode);
}

std::vector<double> forward_solve(const GlobalSystem& sys) { return forward_solve(sys, sys.b_l); }

std::vector<double> forward_solve(const GlobalSystem& sys, const std::vector<double>& rhs) {
  if (static_cast<std::int64_t>(rhs.size()) != sys.dim())
    throw std::invalid_argument("forward_solve: dimension mismatch");
  const std::int64_t d = sys.d_c;
  std::vector<double> y(rhs.size());
  std::vector<double> prev(static_cast<size_t>(d)), cur(static_cast<size_t>(d));
  for (std::int64_t i = 0; i < d; ++i) prev[i] = rhs[i], y[i] = rhs[i];
  for (std::int64_t blk = 1; blk < sys.num_blocks; ++blk) {
    if (blk <= sys.nt) {
      sys.a_tilde.matvec(prev, cur);
    } else {
      cur = prev;
    }
    const std::int64_t off = blk * d;
    for (std::int64_t i = 0; i < d; ++i) {
      cur[i] += rhs[off + i];
      y[off + i] = cur[i];
    }
    std::swap(prev, cur);
  }
  return y;
}

std::vector<double> adjoint_apply(const GlobalSystem& sys, const std::vector<double>& v) {
  if (static_cast<std::int64_t>(v.size()) != sys.dim())
    throw std::invalid_argument("adjoint_apply: dimension mismatch");
  return sys.l_t.matvec(v);
}

std::vector<double> adjoint_solve(const GlobalSystem& sys, const std::vector<double>& v) {
  if (static_cast<std::int64_t>(v.size()) != sys.dim())
    throw std::invalid_argument("adjoint_solve: dimension mismatch");
  const std::int64_t d = sys.d_c;
  std::vector<double> x(v.size());
  std::vector<double> next(static_cast<size_t>(d)), cur(static_cast<size_t>(d));
  const std::int64_t last = sys.num_blocks - 1;
  for (std::int64_t i = 0; i < d; ++i) next[i] = v[last * d + i], x[last * d + i] = next[i];
  for (std::int64_t blk = last - 1; blk >= 0; --blk) {
    if (blk + 1 <= sys.nt) {
      sys.a_tilde_t.matvec(next, cur);
    } else {
      cur = next;
    }
    const std::int64_t off = blk * d;
    for (std::int64_t i = 0; i < d; ++i) {
      cur[i] += v[off + i];
      x[off + i] = cur[i];
    }
    std::swap(next, cur);
  }
  return x;
}

std::vector<double> extract_block(const GlobalSystem& sys, const std::vector<double>& y,
                                  std::int64_t k) {
  if (k < 0 || k >= sys.num_blocks) throw std::out_of_range("extract_block: block index");
  if (static_cast<std::int64_t>(y.size()) != sys.dim())
    throw std::invalid_argument("extract_block: dimension mismatch");
  return std::vector<double>(y.begin() + k * sys.d_c, y.begin() + (k + 1) * sys.d_c);
}

double relative_error(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) throw std::invalid_argument("relative_error: dimension mismatch");
  double den = norm2(v);
  if (den == 0.0) throw std::domain_error("relative_error: reference vector is zero");
  double num = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    double d = u[i] - v[i];
    num += d * d;
  }
  return std::sqrt(num) / den;
}

}  // namespace qlbm
