#include "qlbm/lattice.hpp"

#include <bit>
#include <stdexcept>

namespace qlbm {
namespace d2q9 {

bool is_physical(int q) {
  if (q < 0 || q >= kQPad) return false;
  return (q & 0b11) != 0b11 && ((q >> 2) & 0b11) != 0b11;
}

int axis_component(int bits) {
  switch (bits & 0b11) {
    case 0b00: return 0;
    case 0b01: return -1;
    case 0b10: return +1;
    default: return 0;  // 11: non-physical, net-zero shift
  }
}

Vec2i velocity(int q) {
  if (!is_physical(q)) throw std::invalid_argument("velocity: non-physical index " + std::to_string(q));
  return {axis_component(q & 0b11), axis_component((q >> 2) & 0b11)};
}

Vec2i effective_shift(int q) {
  return {axis_component(q & 0b11), axis_component((q >> 2) & 0b11)};
}

double weight(int q) {
  auto [num, den] = weight_rational(q);
  return static_cast<double>(num) / static_cast<double>(den);
}

std::pair<long, long> weight_rational(int q) {
  Vec2i c = velocity(q);
  int norm2 = c.x * c.x + c.y * c.y;
  if (norm2 == 0) return {4, 9};
  if (norm2 == 1) return {1, 9};
  return {1, 36};
}

int phys_position(int q) {
  for (int i = 0; i < kQPhys; ++i)
    if (kPhysical[i] == q) return i;
  throw std::invalid_argument("phys_position: non-physical index " + std::to_string(q));
}

namespace {
int encode_axis(int c) {
  switch (c) {
    case 0: return 0b00;
    case -1: return 0b01;
    case +1: return 0b10;
    default: throw std::invalid_argument("encode_velocity: component outside {-1,0,+1}");
  }
}
}  // namespace

int encode_velocity(Vec2i c) {
  return encode_axis(c.x) | (encode_axis(c.y) << 2);
}

int opposite(int q) {
  if (!is_physical(q)) throw std::invalid_argument("opposite: non-physical index " + std::to_string(q));
  int x = q & 0b11;
  int y = (q >> 2) & 0b11;
  auto swap_pair = [](int b) { return ((b & 1) << 1) | ((b >> 1) & 1); };
  return swap_pair(x) | (swap_pair(y) << 2);
}

}  // namespace d2q9

std::string to_string(BCType bc) {
  switch (bc) {
    case BCType::Interior: return "interior";
    case BCType::Outflow: return "outflow";
    case BCType::BounceBack: return "bounce-back";
  }
  return "?";
}

Geometry::Geometry(int nx, int ny, std::optional<Obstacle> obstacle)
    : nx_(nx), ny_(ny), obstacle_(obstacle) {
  if (nx < 2 || ny < 2 || !std::has_single_bit(unsigned(nx)) || !std::has_single_bit(unsigned(ny)))
    throw std::invalid_argument("Geometry: nx, ny must be powers of two >= 2");
  if (obstacle_) {
    const Obstacle& o = *obstacle_;
    if (o.wx < 1 || o.wy < 1)
      throw std::invalid_argument("Geometry: obstacle extents must be positive");
    int x1 = o.x0 + o.wx - 1;
    int y1 = o.y0 + o.wy - 1;
    if (o.x0 < 1 || o.y0 < 1 || y1 > ny - 2)
      throw std::invalid_argument("Geometry: obstacle must lie strictly inside the domain");
    // Keep the column nx-2 free as well: the outflow extrapolation copies
    // from it, so an obstacle there would make the boundary ill-defined.
    if (x1 > nx - 3)
      throw std::invalid_argument("Geometry: obstacle may not touch the outflow region (x >= nx-2)");
  }
}

Geometry Geometry::with_default_obstacle(int nx, int ny) {
  if (nx < 8 || ny < 8)
    throw std::invalid_argument("Geometry: default obstacle requires nx, ny >= 8");
  return Geometry(nx, ny, Obstacle{nx / 4, 3 * ny / 8, nx / 8, ny / 4});
}

bool Geometry::in_obstacle(Vec2i n) const {
  if (!obstacle_) return false;
  const Obstacle& o = *obstacle_;
  return n.x >= o.x0 && n.x < o.x0 + o.wx && n.y >= o.y0 && n.y < o.y0 + o.wy;
}

BCType classify_bc(Vec2i n, int q_star, const Geometry& geom) {
  if (d2q9::is_physical(q_star) && q_star != d2q9::kRest) {
    Vec2i c = d2q9::velocity(q_star);
    Vec2i dest{n.x + c.x, n.y + c.y};
    bool wall = (n.x == 0 && c.x == -1) || (n.y == geom.ny() - 1 && c.y == +1) ||
                (n.y == 0 && c.y == -1);
    bool obstacle_cross =
        geom.in_domain(dest) && (geom.in_obstacle(n) != geom.in_obstacle(dest));
    if (wall || obstacle_cross) return BCType::BounceBack;
  }
  if (n.x == geom.nx() - 1) {
    bool right_pointing = (q_star & 0b11) == 0b10;
    bool extrap_slot = q_star == 3 || q_star == 7 || q_star == 11;
    if (right_pointing || extrap_slot) return BCType::Outflow;
  }
  return BCType::Interior;
}

BCType classify_bc_out(Vec2i n_out, int q_out, const Geometry& geom) {
  if (d2q9::is_physical(q_out) && q_out != d2q9::kRest) {
    Vec2i c = d2q9::velocity(d2q9::opposite(q_out));
    Vec2i rev{n_out.x + c.x, n_out.y + c.y};
    bool wall = (n_out.x == 0 && c.x == -1) || (n_out.y == geom.ny() - 1 && c.y == +1) ||
                (n_out.y == 0 && c.y == -1);
    bool obstacle_cross =
        geom.in_domain(rev) && (geom.in_obstacle(n_out) != geom.in_obstacle(rev));
    if (wall || obstacle_cross) return BCType::BounceBack;
  }
  if (n_out.x == geom.nx() - 1) {
    bool left_pointing = (q_out & 0b11) == 0b01;
    if (left_pointing || !d2q9::is_physical(q_out)) return BCType::Outflow;
  }
  return BCType::Interior;
}

}  // namespace qlbm
