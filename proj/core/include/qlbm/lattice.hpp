#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace qlbm {

/// Lattice speed of sound squared, in lattice units (c_s = 1/sqrt(3)).
inline constexpr double kCs2 = 1.0 / 3.0;

/// Integer 2-vector for node coordinates and discrete velocities.
struct Vec2i {
  int x = 0;
  int y = 0;
  friend bool operator==(const Vec2i&, const Vec2i&) = default;
};

/// D2Q9 velocity set with the 4-bit index encoding:
/// bits q[1:0] encode c_x in {0,-1,+1} as {00,01,10}, bits q[3:2] encode c_y
/// the same way. Physical indices are {0,1,2,4,5,6,8,9,10}; the remaining
/// 4-bit patterns are non-physical padding.
namespace d2q9 {

inline constexpr int kQPad = 16;   // padded velocity count (2^4)
inline constexpr int kQPhys = 9;   // physical velocity count

/// Physical velocity indices in ascending order.
inline constexpr std::array<int, kQPhys> kPhysical = {0, 1, 2, 4, 5, 6, 8, 9, 10};

/// Named indices (values under the bit encoding).
inline constexpr int kRest = 0;
inline constexpr int kL = 1;
inline constexpr int kR = 2;
inline constexpr int kD = 4;
inline constexpr int kDL = 5;
inline constexpr int kDR = 6;
inline constexpr int kU = 8;
inline constexpr int kUL = 9;
inline constexpr int kUR = 10;

bool is_physical(int q);

/// Component decode of one bit pair; returns 0 for the non-physical pattern 11.
int axis_component(int bits);

/// Velocity vector for a physical index.
Vec2i velocity(int q);

/// Net coordinate shift of an arbitrary 4-bit index under the circuit
/// convention where the 11 pattern fires both the increment and the
/// decrement (net zero).
Vec2i effective_shift(int q);

/// Weight w_q for a physical index.
double weight(int q);

/// Weight as an exact rational (num, den).
std::pair<long, long> weight_rational(int q);

/// Position of a physical index in ascending physical order (0..8).
int phys_position(int q);

int encode_velocity(Vec2i c);
int opposite(int q);

}  // namespace d2q9

/// Boundary-condition type, two-bit code BC[1]BC[0].
enum class BCType : int {
  Interior = 0b00,
  Outflow = 0b10,
  BounceBack = 0b11,
};

std::string to_string(BCType bc);

/// Axis-aligned obstacle rectangle in node coordinates (inclusive extents).
struct Obstacle {
  int x0 = 0;
  int y0 = 0;
  int wx = 0;
  int wy = 0;
  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

/// Channel geometry: left wall = inflow, right = outflow, top/bottom = no-slip.
/// nx and ny must be powers of two. The obstacle, when present, must lie
/// strictly inside the domain and keep clear of the outflow column nx-2
/// (the extrapolation there reads its upstream neighbour).
class Geometry {
 public:
  Geometry(int nx, int ny, std::optional<Obstacle> obstacle = std::nullopt);

  /// Geometry with the default obstacle wx=nx/8, wy=ny/4, x0=nx/4, y0=3*ny/8.
  static Geometry with_default_obstacle(int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::optional<Obstacle>& obstacle() const { return obstacle_; }

  int num_nodes() const { return nx_ * ny_; }
  bool in_domain(Vec2i n) const {
    return n.x >= 0 && n.x < nx_ && n.y >= 0 && n.y < ny_;
  }
  bool in_obstacle(Vec2i n) const;

  /// Node index in x-major order.
  int node_index(Vec2i n) const { return n.x * ny_ + n.y; }

 private:
  int nx_;
  int ny_;
  std::optional<Obstacle> obstacle_;
};

/// Boundary classification of a post-collision pair (n, q*), precedence:
/// (1) BounceBack when the destination n + c_{q*} crosses the left wall, the
///     top or bottom wall, or the obstacle surface in either direction
///     (non-physical q* never reaches this clause);
/// (2) Outflow at the right boundary when c_x = +1 or q* in {3,7,11};
/// (3) Interior otherwise.
BCType classify_bc(Vec2i n, int q_star, const Geometry& geom);

/// Classification in terms of post-streaming output registers (n_out, q_out),
/// used to uncompute the BC value. Mirrors classify_bc: bounce-back when the
/// reverse destination n_out + c(opposite(q_out)) crosses a sealed surface,
/// outflow at the right boundary for c_x = -1 or non-physical q_out.
BCType classify_bc_out(Vec2i n_out, int q_out, const Geometry& geom);

}  // namespace qlbm
