#pragma once

#include <complex>

namespace homsim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.141592653589793238462643383279502884;

using Complex = std::complex<double>;

inline constexpr Complex kImag{0.0, 1.0};

}  // namespace homsim
