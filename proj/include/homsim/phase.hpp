#pragma once

#include <cmath>

#include "homsim/constants.hpp"

namespace homsim {

// Optical path phases omega*n*L/c reach ~1e6 rad for cm-scale circuits, so a
// plain double argument carries ~1e-10 rad of rounding noise; that is exactly
// the scale of the amplitude tolerances used throughout. All phase arguments
// are therefore accumulated in long double and reduced mod 2pi before exp.
using PhaseArg = long double;

inline PhaseArg optical_time(double length, double refractive_index) {
  return static_cast<PhaseArg>(length) * static_cast<PhaseArg>(refractive_index) /
         static_cast<PhaseArg>(kSpeedOfLight);
}

// exp(i*arg)
inline Complex unit_phase(PhaseArg arg) {
  constexpr PhaseArg two_pi = 6.283185307179586476925286766559005768L;
  const PhaseArg r = std::fmod(arg, two_pi);
  return {static_cast<double>(std::cos(r)), static_cast<double>(std::sin(r))};
}

// exp(i * omega * n * length / c)
inline Complex propagation_phase(double omega, double length, double refractive_index) {
  return unit_phase(static_cast<PhaseArg>(omega) * optical_time(length, refractive_index));
}

}  // namespace homsim
