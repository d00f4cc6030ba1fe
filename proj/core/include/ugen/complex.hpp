#pragma once

#include <cmath>
#include <complex>

namespace ugen {

using Cx = std::complex<double>;

inline bool is_finite(Cx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline double abs2(Cx z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

}  // namespace ugen
