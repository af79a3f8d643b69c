#ifndef SHUTTLE_CONSTANTS_HPP
#define SHUTTLE_CONSTANTS_HPP

#include <numbers>

namespace shuttle {

// All energies are meV, all times ns.  hbar enters exactly once, at the
// propagation/ODE layer, as phase = E * t / hbar.
inline constexpr double hbar_mev_ns = 6.582119569e-4;

// Energy of one MHz quantum, h * (1 MHz), in meV.
inline constexpr double planck_mev_per_mhz =
    2.0 * std::numbers::pi * hbar_mev_ns * 1e-3;

}  // namespace shuttle

#endif
