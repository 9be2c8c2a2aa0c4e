#include "qlbm/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlbm {

int velocities_per_node(IndexMode mode) {
  return mode == IndexMode::Physical ? d2q9::kQPhys : d2q9::kQPad;
}

std::int64_t state_index(const Geometry& geom, Vec2i n, int q, IndexMode mode) {
  std::int64_t node = geom.node_index(n);
  if (mode == IndexMode::Physical) return node * d2q9::kQPhys + d2q9::phys_position(q);
  return node * d2q9::kQPad + q;
}

std::int64_t state_dim(const Geometry& geom, IndexMode mode) {
  return static_cast<std::int64_t>(geom.num_nodes()) * velocities_per_node(mode);
}

double CollisionTable::max_abs() const {
  double m = 0.0;
  for (const auto& row : c)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

CollisionTable collision_table(double tau, IndexMode mode) {
  if (tau < 0.5) throw std::invalid_argument("collision_table: tau must be at least 1/2");
  CollisionTable t;
  t.tau = tau;
  t.mode = mode;
  const int nq = velocities_per_node(mode);
  t.c.assign(nq, std::vector<double>(nq, 0.0));
  auto slot = [&](int q) {
    return mode == IndexMode::Physical ? d2q9::phys_position(q) : q;
  };
  for (int qs : d2q9::kPhysical)
    for (int q : d2q9::kPhysical) {
      Vec2i cs = d2q9::velocity(qs);
      Vec2i cq = d2q9::velocity(q);
      // Exact rational w_{q*} * (1 + 3 c.c) before the single division by tau
      // keeps the column sums at 1 up to one rounding.
      auto [wn, wd] = d2q9::weight_rational(qs);
      long num = wn * (1 + 3 * (cs.x * cq.x + cs.y * cq.y));
      double v = static_cast<double>(num) / static_cast<double>(wd) / tau;
      if (qs == q) v += 1.0 - 1.0 / tau;
      t.c[slot(qs)][slot(q)] = v;
    }
  return t;
}

namespace {
int swap_bit_pairs(int q) {
  int x = q & 0b11, y = (q >> 2) & 0b11;
  auto sw = [](int b) { return ((b & 1) << 1) | ((b >> 1) & 1); };
  return sw(x) | (sw(y) << 2);
}
int wrap(int v, int m) { return ((v % m) + m) % m; }
}  // namespace

Destination stream_destination(Vec2i n, int q_star, BCType bc, const Geometry& geom) {
  switch (bc) {
    case BCType::Interior: {
      Vec2i s = d2q9::effective_shift(q_star);
      return {{wrap(n.x + s.x, geom.nx()), wrap(n.y + s.y, geom.ny())}, q_star};
    }
    case BCType::BounceBack:
      return {n, swap_bit_pairs(q_star)};
    case BCType::Outflow: {
      // y shift applies, x does not; then swap the x bit pair and flip q[1].
      Vec2i s = d2q9::effective_shift(q_star);
      int q = swap_bit_pairs(q_star & 0b11) | (q_star & 0b1100);
      q ^= 0b10;
      return {{n.x, wrap(n.y + s.y, geom.ny())}, q};
    }
  }
  throw std::logic_error("stream_destination: bad BCType");
}

bool extrapolation_slot(int slot, int& carried_q) {
  switch (slot) {
    case 3: carried_q = d2q9::kL; return true;
    case 7: carried_q = d2q9::kDL; return true;
    case 11: carried_q = d2q9::kUL; return true;
    default: return false;
  }
}

bool extrapolation_slot_masked(Vec2i n, int slot, const Geometry& geom) {
  if (slot == 7) return n.y == 0;
  if (slot == 11) return n.y == geom.ny() - 1;
  return false;
}

SparseMatrix build_S(const Geometry& geom, IndexMode mode) {
  const std::int64_t dim = state_dim(geom, mode);
  std::vector<Triplet> t;
  if (mode == IndexMode::Physical) {
    for (int x = 0; x < geom.nx(); ++x)
      for (int y = 0; y < geom.ny(); ++y) {
        Vec2i n{x, y};
        for (int qs : d2q9::kPhysical) {
          BCType bc = classify_bc(n, qs, geom);
          if (bc == BCType::Outflow) continue;  // discarded column
          Destination d = stream_destination(n, qs, bc, geom);
          t.push_back({state_index(geom, d.n, d.q, mode), state_index(geom, n, qs, mode), 1.0});
        }
        // Extrapolation copies at the right boundary.
        if (x == geom.nx() - 1)
          for (int slot : {3, 7, 11}) {
            if (extrapolation_slot_masked(n, slot, geom)) continue;
            int carried = 0;
            extrapolation_slot(slot, carried);
            Destination d = stream_destination(n, slot, BCType::Outflow, geom);
            t.push_back(
                {state_index(geom, d.n, d.q, mode), state_index(geom, n, carried, mode), 1.0});
          }
      }
    return SparseMatrix(dim, dim, std::move(t));
  }
  // Padded mode: route every value-carrying pair as the circuit does, then
  // complete the map to a permutation over the remaining (zero-amplitude)
  // sources and destinations in canonical index order.
  std::vector<std::int64_t> dest_of(static_cast<size_t>(dim), -1);
  std::vector<char> dest_taken(static_cast<size_t>(dim), 0);
  auto value_carrying = [&](Vec2i n, int qs) {
    if (d2q9::is_physical(qs)) return true;
    int carried = 0;
    if (!extrapolation_slot(qs, carried)) return false;
    return n.x == geom.nx() - 1 && !extrapolation_slot_masked(n, qs, geom);
  };
  for (int x = 0; x < geom.nx(); ++x)
    for (int y = 0; y < geom.ny(); ++y) {
      Vec2i n{x, y};
      for (int qs = 0; qs < d2q9::kQPad; ++qs) {
        if (!value_carrying(n, qs)) continue;
        BCType bc = classify_bc(n, qs, geom);
        Destination d = stream_destination(n, qs, bc, geom);
        std::int64_t src = state_index(geom, n, qs, mode);
        std::int64_t dst = state_index(geom, d.n, d.q, mode);
        if (dest_taken[dst])
          throw std::logic_error("build_S: value-carrying routes collide");
        dest_of[src] = dst;
        dest_taken[dst] = 1;
      }
    }
  std::int64_t next_free = 0;
  for (std::int64_t src = 0; src < dim; ++src) {
    if (dest_of[src] >= 0) continue;
    while (dest_taken[next_free]) ++next_free;
    dest_of[src] = next_free;
    dest_taken[next_free] = 1;
  }
  for (std::int64_t src = 0; src < dim; ++src) t.push_back({dest_of[src], src, 1.0});
  return SparseMatrix(dim, dim, std::move(t));
}

std::vector<double> build_forcing(const Geometry& geom, const FlowParams& params, IndexMode mode) {
  std::vector<double> b(static_cast<size_t>(state_dim(geom, mode)), 0.0);
  for (int y = 0; y < geom.ny(); ++y)
    for (int q : {d2q9::kR, d2q9::kUR, d2q9::kDR}) {
      Vec2i c = d2q9::velocity(q);
      double uc = params.u_in[0] * c.x + params.u_in[1] * c.y;
      b[state_index(geom, {0, y}, q, mode)] = 2.0 * d2q9::weight(q) * uc / kCs2;
    }
  return b;
}

SparseMatrix build_A(const Geometry& geom, const FlowParams& params, IndexMode mode) {
  const CollisionTable table = collision_table(params.tau, IndexMode::Physical);
  const std::int64_t dim = state_dim(geom, mode);
  std::vector<Triplet> t;
  auto emit_row = [&](Vec2i n, int row_q_phys, Destination d) {
    // Row d of A gets the collision row of row_q_phys applied at node n.
    if (mode == IndexMode::Physical && !d2q9::is_physical(d.q)) return;
    std::int64_t row = state_index(geom, d.n, d.q, mode);
    for (int q : d2q9::kPhysical) {
      double v = table.c[d2q9::phys_position(row_q_phys)][d2q9::phys_position(q)];
      if (v == 0.0) continue;
      t.push_back({row, state_index(geom, n, q, mode), v});
    }
  };
  for (int x = 0; x < geom.nx(); ++x)
    for (int y = 0; y < geom.ny(); ++y) {
      Vec2i n{x, y};
      for (int qs : d2q9::kPhysical) {
        BCType bc = classify_bc(n, qs, geom);
        if (bc == BCType::Outflow) {
          if (mode == IndexMode::Padded)
            emit_row(n, qs, stream_destination(n, qs, bc, geom));  // parked row
          continue;
        }
        emit_row(n, qs, stream_destination(n, qs, bc, geom));
      }
      if (x == geom.nx() - 1)
        for (int slot : {3, 7, 11}) {
          if (extrapolation_slot_masked(n, slot, geom)) continue;
          int carried = 0;
          extrapolation_slot(slot, carried);
          emit_row(n, carried, stream_destination(n, slot, BCType::Outflow, geom));
        }
    }
  return SparseMatrix(dim, dim, std::move(t));
}

SparseMatrix interpolate(const SparseMatrix& a, double h) {
  if (h < 0.0 || h > 1.0) throw std::invalid_argument("interpolate: h must lie in [0,1]");
  if (a.nrows() != a.ncols()) throw std::invalid_argument("interpolate: square matrix required");
  return a.scaled_plus_identity(h, 1.0 - h);
}

std::vector<double> embed_padded(const Geometry& geom, const std::vector<double>& phys) {
  if (phys.size() != static_cast<size_t>(state_dim(geom, IndexMode::Physical)))
    throw std::invalid_argument("embed_padded: dimension mismatch");
  std::vector<double> out(static_cast<size_t>(state_dim(geom, IndexMode::Padded)), 0.0);
  for (int node = 0; node < geom.num_nodes(); ++node)
    for (int i = 0; i < d2q9::kQPhys; ++i)
      out[static_cast<size_t>(node) * d2q9::kQPad + d2q9::kPhysical[i]] =
          phys[static_cast<size_t>(node) * d2q9::kQPhys + i];
  return out;
}

std::vector<double> project_physical(const Geometry& geom, const std::vector<double>& padded) {
  if (padded.size() != static_cast<size_t>(state_dim(geom, IndexMode::Padded)))
    throw std::invalid_argument("project_physical: dimension mismatch");
  std::vector<double> out(static_cast<size_t>(state_dim(geom, IndexMode::Physical)), 0.0);
  for (int node = 0; node < geom.num_nodes(); ++node)
    for (int i = 0; i < d2q9::kQPhys; ++i)
      out[static_cast<size_t>(node) * d2q9::kQPhys + i] =
          padded[static_cast<size_t>(node) * d2q9::kQPad + d2q9::kPhysical[i]];
  return out;
}

SparseMatrix project_matrix_physical(const Geometry& geom, const SparseMatrix& padded) {
  const std::int64_t dim_pad = state_dim(geom, IndexMode::Padded);
  if (padded.nrows() != dim_pad || padded.ncols() != dim_pad)
    throw std::invalid_argument("project_matrix_physical: dimension mismatch");
  std::vector<std::int64_t> phys_of(static_cast<size_t>(dim_pad), -1);
  for (int node = 0; node < geom.num_nodes(); ++node)
    for (int i = 0; i < d2q9::kQPhys; ++i)
      phys_of[static_cast<size_t>(node) * d2q9::kQPad + d2q9::kPhysical[i]] =
          static_cast<std::int64_t>(node) * d2q9::kQPhys + i;
  std::vector<Triplet> t;
  auto rp = padded.row_ptr();
  auto cols = padded.cols();
  auto vals = padded.values();
  for (std::int64_t r = 0; r < dim_pad; ++r) {
    if (phys_of[r] < 0) continue;
    for (std::int64_t k = rp[r]; k < rp[r + 1]; ++k) {
      if (phys_of[cols[k]] < 0) continue;
      t.push_back({phys_of[r], phys_of[cols[k]], vals[k]});
    }
  }
  return SparseMatrix(state_dim(geom, IndexMode::Physical), state_dim(geom, IndexMode::Physical),
                      std::move(t));
}

std::vector<double> field_to_vector(const Field& f) { return f.values; }

Field vector_to_field(const Geometry& geom, const std::vector<double>& v) {
  if (v.size() != static_cast<size_t>(state_dim(geom, IndexMode::Physical)))
    throw std::invalid_argument("vector_to_field: dimension mismatch");
  Field f(geom.nx(), geom.ny());
  f.values = v;
  return f;
}

}  // namespace qlbm
