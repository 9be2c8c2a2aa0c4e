#include "qlbm/statevec.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace qlbm {

namespace {

struct GateMasks {
  std::uint64_t ctrl_mask = 0;
  std::uint64_t ctrl_val = 0;
  std::uint64_t free_mask = 0;

  GateMasks(int num_qubits, const Gate& g, bool exclude_targets) {
    for (const Control& c : g.controls) {
      ctrl_mask |= std::uint64_t(1) << c.qubit;
      if (c.positive) ctrl_val |= std::uint64_t(1) << c.qubit;
    }
    std::uint64_t used = ctrl_mask;
    if (exclude_targets)
      for (int t : g.targets) used |= std::uint64_t(1) << t;
    std::uint64_t all = num_qubits == 64 ? ~std::uint64_t(0)
                                         : (std::uint64_t(1) << num_qubits) - 1;
    free_mask = all & ~used;
  }
};

// Visits base | x for every submask x of free_mask.
template <class Fn>
void for_each_subset(std::uint64_t base, std::uint64_t free_mask, Fn fn) {
  std::uint64_t x = 0;
  do {
    fn(base | x);
    x = (x - free_mask) & free_mask;
  } while (x != 0);
}

template <class T>
void apply_gate(const Gate& g, std::vector<T>& amps, int nq) {
  switch (g.kind) {
    case GateKind::H: {
      const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
      GateMasks m(nq, g, true);
      const std::uint64_t tbit = std::uint64_t(1) << g.targets[0];
      for_each_subset(m.ctrl_val, m.free_mask, [&](std::uint64_t i0) {
        T a = amps[i0], b = amps[i0 | tbit];
        amps[i0] = (a + b) * inv_sqrt2;
        amps[i0 | tbit] = (a - b) * inv_sqrt2;
      });
      break;
    }
    case GateKind::X: {
      GateMasks m(nq, g, true);
      const std::uint64_t tbit = std::uint64_t(1) << g.targets[0];
      for_each_subset(m.ctrl_val, m.free_mask,
                      [&](std::uint64_t i0) { std::swap(amps[i0], amps[i0 | tbit]); });
      break;
    }
    case GateKind::Z: {
      GateMasks m(nq, g, true);
      const std::uint64_t tbit = std::uint64_t(1) << g.targets[0];
      for_each_subset(m.ctrl_val | tbit, m.free_mask,
                      [&](std::uint64_t i) { amps[i] *= T(-1.0); });
      break;
    }
    case GateKind::RY: {
      const double co = std::cos(g.angle / 2.0), si = std::sin(g.angle / 2.0);
      GateMasks m(nq, g, true);
      const std::uint64_t tbit = std::uint64_t(1) << g.targets[0];
      for_each_subset(m.ctrl_val, m.free_mask, [&](std::uint64_t i0) {
        T a = amps[i0], b = amps[i0 | tbit];
        amps[i0] = a * co - b * si;
        amps[i0 | tbit] = a * si + b * co;
      });
      break;
    }
    case GateKind::Swap: {
      GateMasks m(nq, g, true);
      const std::uint64_t abit = std::uint64_t(1) << g.targets[0];
      const std::uint64_t bbit = std::uint64_t(1) << g.targets[1];
      for_each_subset(m.ctrl_val | abit, m.free_mask,
                      [&](std::uint64_t i) { std::swap(amps[i], amps[(i ^ abit) | bbit]); });
      break;
    }
    case GateKind::Inc:
    case GateKind::Dec: {
      GateMasks m(nq, g, true);
      const int width = static_cast<int>(g.targets.size());
      const std::uint64_t cycle = std::uint64_t(1) << width;
      std::vector<std::uint64_t> offs(cycle, 0);
      for (std::uint64_t v = 0; v < cycle; ++v)
        for (int b = 0; b < width; ++b) offs[v] |= ((v >> b) & 1) << g.targets[b];
      for_each_subset(m.ctrl_val, m.free_mask, [&](std::uint64_t base) {
        if (g.kind == GateKind::Inc) {
          T last = amps[base | offs[cycle - 1]];
          for (std::uint64_t v = cycle - 1; v >= 1; --v)
            amps[base | offs[v]] = amps[base | offs[v - 1]];
          amps[base | offs[0]] = last;
        } else {
          T first = amps[base | offs[0]];
          for (std::uint64_t v = 0; v + 1 < cycle; ++v)
            amps[base | offs[v]] = amps[base | offs[v + 1]];
          amps[base | offs[cycle - 1]] = first;
        }
      });
      break;
    }
  }
}

template <class T>
void apply_impl(const Circuit& c, std::vector<T>& amps) {
  const int nq = c.layout.num_qubits();
  if (amps.size() != (std::uint64_t(1) << nq))
    throw std::invalid_argument("apply: state size does not match the layout");
  for (const Gate& g : c.gates) apply_gate(g, amps, nq);
}

// Sparse amplitude map for basis-column extraction: states reached from one
// basis vector keep a support bounded by 2^{#H gates}, far below the dense
// dimension. Each output amplitude receives at most two contributions, so the
// result does not depend on the map's iteration order.
using SparseState = std::unordered_map<std::uint64_t, double>;

std::uint64_t permute_basis(const Gate& g, std::uint64_t i) {
  switch (g.kind) {
    case GateKind::X:
      return i ^ (std::uint64_t(1) << g.targets[0]);
    case GateKind::Swap: {
      std::uint64_t a = (i >> g.targets[0]) & 1, b = (i >> g.targets[1]) & 1;
      if (a == b) return i;
      return i ^ (std::uint64_t(1) << g.targets[0]) ^ (std::uint64_t(1) << g.targets[1]);
    }
    case GateKind::Inc:
    case GateKind::Dec: {
      const int width = static_cast<int>(g.targets.size());
      std::uint64_t v = 0;
      for (int b = 0; b < width; ++b) v |= ((i >> g.targets[b]) & 1) << b;
      std::uint64_t span = std::uint64_t(1) << width;
      v = (v + (g.kind == GateKind::Inc ? 1 : span - 1)) & (span - 1);
      for (int b = 0; b < width; ++b) {
        i &= ~(std::uint64_t(1) << g.targets[b]);
        i |= ((v >> b) & 1) << g.targets[b];
      }
      return i;
    }
    default:
      throw std::logic_error("permute_basis: not a permutation gate");
  }
}

void apply_gate_sparse(const Gate& g, SparseState& s, SparseState& scratch) {
  scratch.clear();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::X:
    case GateKind::Swap:
    case GateKind::Inc:
    case GateKind::Dec:
      for (const auto& [i, a] : s)
        scratch[controls_satisfied(g, i) ? permute_basis(g, i) : i] += a;
      break;
    case GateKind::Z:
      for (const auto& [i, a] : s) {
        bool flip = controls_satisfied(g, i) && ((i >> g.targets[0]) & 1);
        scratch[i] += flip ? -a : a;
      }
      break;
    case GateKind::H: {
      const std::uint64_t tbit = std::uint64_t(1) << g.targets[0];
      for (const auto& [i, a] : s) {
        if (!controls_satisfied(g, i)) {
          scratch[i] += a;
          continue;
        }
        scratch[i & ~tbit] += a * inv_sqrt2;
        scratch[i | tbit] += ((i & tbit) ? -a : a) * inv_sqrt2;
      }
      break;
    }
    case GateKind::RY: {
      const double co = std::cos(g.angle / 2.0), si = std::sin(g.angle / 2.0);
      const std::uint64_t tbit = std::uint64_t(1) << g.targets[0];
      for (const auto& [i, a] : s) {
        if (!controls_satisfied(g, i)) {
          scratch[i] += a;
          continue;
        }
        if (i & tbit) {
          scratch[i & ~tbit] += -a * si;
          scratch[i] += a * co;
        } else {
          scratch[i] += a * co;
          scratch[i | tbit] += a * si;
        }
      }
      break;
    }
  }
  s.swap(scratch);
}

}  // namespace

void apply(const Circuit& c, std::vector<double>& amps) { apply_impl(c, amps); }
void apply(const Circuit& c, std::vector<std::complex<double>>& amps) { apply_impl(c, amps); }

int thread_cap() {
  if (const char* env = std::getenv("QLBM_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

DenseBlock extract_block(const Circuit& c, ExtractMethod method) {
  const int nq = c.layout.num_qubits();
  if (nq > kMaxSimQubits)
    throw std::invalid_argument(
        "extract_block: " + std::to_string(nq) + " qubits exceed the simulation budget of " +
        std::to_string(kMaxSimQubits) + "; shrink nx, ny or nt");
  const int ns = c.layout.system_qubits();
  const std::int64_t dim = std::int64_t(1) << ns;
  DenseBlock out;
  out.nrows = dim;
  out.ncols = dim;
  out.data.assign(static_cast<size_t>(dim) * dim, 0.0);

  const int workers = std::max(1, std::min<int>(thread_cap(), static_cast<int>(dim)));
  std::atomic<std::int64_t> next{0};
  auto run = [&]() {
    std::vector<double> dense;
    SparseState sparse, scratch;
    for (;;) {
      std::int64_t col = next.fetch_add(1);
      if (col >= dim) return;
      if (method == ExtractMethod::Dense) {
        dense.assign(std::uint64_t(1) << nq, 0.0);
        dense[static_cast<size_t>(col)] = 1.0;  // ancillas start at |0...0>
        apply(c, dense);
        for (std::int64_t r = 0; r < dim; ++r) out.at(r, col) = dense[static_cast<size_t>(r)];
      } else {
        sparse.clear();
        sparse[static_cast<std::uint64_t>(col)] = 1.0;
        for (const Gate& g : c.gates) apply_gate_sparse(g, sparse, scratch);
        for (const auto& [i, a] : sparse)
          if (i < static_cast<std::uint64_t>(dim)) out.at(static_cast<std::int64_t>(i), col) = a;
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  return out;
}

VerifyReport verify(const Circuit& c, const SparseMatrix& target, double alpha, double tol) {
  DenseBlock block = extract_block(c);
  if (block.nrows != target.nrows() || block.ncols != target.ncols())
    throw std::invalid_argument("verify: block and target dimensions differ");
  VerifyReport rep;
  rep.tol = tol;
  auto rp = target.row_ptr();
  auto cols = target.cols();
  auto vals = target.values();
  for (std::int64_t r = 0; r < target.nrows(); ++r) {
    std::int64_t k = rp[r];
    for (std::int64_t col = 0; col < target.ncols(); ++col) {
      double want = 0.0;
      if (k < rp[r + 1] && cols[k] == col) want = vals[k++];
      double err = std::abs(block.at(r, col) - want / alpha);
      if (err > rep.max_abs_err) {
        rep.max_abs_err = err;
        rep.worst_row = r;
        rep.worst_col = col;
      }
    }
  }
  rep.pass = rep.max_abs_err <= tol;
  return rep;
}

}  // namespace qlbm
