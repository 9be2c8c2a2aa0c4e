#pragma once

#include <vector>

#include "qlbm/carleman.hpp"
#include "qlbm/circuit.hpp"
#include "qlbm/lattice.hpp"
#include "qlbm/reference.hpp"

namespace qlbm {

/// Register layout of U_A: system = (q, ny, nx) with q least significant,
/// matching the padded state index (n_x*ny + n_y)*16 + q; ancillas qstar, bc,
/// amp.
RegisterLayout ua_layout(const Geometry& geom);

/// Register layout of U_L: system = (q, ny, nx, t, s); ancillas qstar, bc,
/// in_l, amp, flag.
RegisterLayout ul_layout(const Geometry& geom, int nt, int w_idle);

/// Multi-controlled X gates computing classify_bc(n, q*) into the bc register
/// from the (nx, ny, qstar) registers. extra controls are appended to every
/// gate.
std::vector<Gate> build_OsetBC(const RegisterLayout& layout, const Geometry& geom,
                               const std::vector<Control>& extra = {});

/// Controlled R_Y gates loading factor*C[q*][q]/scale onto the amplitude
/// qubit, plus the bc=10-controlled extrapolation loads at slots {3,7,11}
/// with their corner masks.
std::vector<Gate> build_Ocollision(const RegisterLayout& layout, const Geometry& geom,
                                   const CollisionTable& table, double factor, double scale,
                                   const std::vector<Control>& extra = {});

/// Swap of the velocity registers followed by the bc-controlled coordinate
/// shifts, bounce-back bit swaps and outflow bit flip.
std::vector<Gate> build_Ostreaming(const RegisterLayout& layout,
                                   const std::vector<Control>& extra = {});

/// Multi-controlled X gates clearing the bc register per classify_bc_out on
/// the post-streaming (nx, ny, q) registers.
std::vector<Gate> build_OunsetBC(const RegisterLayout& layout, const Geometry& geom,
                                 const std::vector<Control>& extra = {});

/// Block-encoding of A^(1) in the padded index space, subnorm max|C| * 2^4.
Circuit build_UA(const Geometry& geom, const FlowParams& params);

/// Block-encoding of the global matrix L in the padded index space, subnorm
/// c_L * 2^5. Requires nt a power of two and W >= 1.
Circuit build_UL(const Geometry& geom, const FlowParams& params);

}  // namespace qlbm
