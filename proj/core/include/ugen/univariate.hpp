#pragma once

#include <vector>

#include "ugen/complex.hpp"

namespace ugen {

/// All d roots (with multiplicity) of c[0] + c[1] u + ... + c[d] u^d.
///
/// Binomial inputs a u^d + b fall to a closed form (the d-th roots of -b/a);
/// everything else runs Aberth-Ehrlich iteration. Each returned root r
/// satisfies |p(r)| <= tol * scale where scale reflects the coefficient
/// magnitudes at |r|. Throws std::invalid_argument on degree < 1 or a zero
/// leading coefficient, and std::runtime_error when the iteration fails to
/// converge (the message carries the worst residual).
std::vector<Cx> univariate_roots(const std::vector<Cx>& coeffs,
                                 double tol = 1e-12);

}  // namespace ugen
