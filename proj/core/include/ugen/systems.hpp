#pragma once

#include <cstdint>
#include <vector>

#include "ugen/mpoly.hpp"

namespace ugen {

/// Katsura-n: n+1 equations in x_0..x_n. Writing x_{-i} = x_i, the linear
/// relation sum_{i=-n}^{n} x_i = 1 folds to x_0 + 2 sum_{i>=1} x_i = 1, and
/// the convolution relations sum_l x_l x_{m-l} = x_m (indices clipped to
/// [-n, n]) fold to one quadric per m in {0, .., n-1}. Requires n >= 2.
PolySystem gen_katsura(int n);

/// Cyclic n-roots: for m = 1..n-1 the degree-m cyclic sums
/// sum_i x_i x_{i+1} .. x_{i+m-1} (indices mod n), plus x_0 x_1 .. x_{n-1} - 1.
/// Requires n >= 3.
PolySystem gen_cyclic(int n);

/// Banded quadrics: f_1 a random linear form, f_2..f_n quadratic forms in the
/// window x_i..x_{i+k} (indices mod n) with coefficients drawn uniformly from
/// [0,1] in both real and imaginary part. Homogeneous; deterministic for a
/// fixed seed. Requires 2 <= k <= n.
PolySystem gen_banded_quadrics(int n, int k, std::uint64_t seed);

/// Symmetric local-kernel system for maximum likelihood estimation on the
/// rank-r symmetric n x n model: a square system of binom(n+1, 2) equations
/// (column sums and above-diagonal entries of the score matrix) in the
/// entries of P1 (r x r symmetric, doubled diagonal), L1 ((n-r) x r) and
/// Lambda ((n-r) x (n-r) symmetric), grouped into up to three variable
/// groups. U must be symmetric with positive entries.
PolySystem gen_mle_symmetric(int n, int r,
                             const std::vector<std::vector<int>>& U);

/// Index of the (1, n) above-diagonal entry equation in gen_mle_symmetric's
/// ordering (column sums first, then above-diagonal entries row by row).
int mle_dropped_equation_index(int n);

/// Symmetric positive count matrix with entries in [1, 9].
std::vector<std::vector<int>> random_count_matrix(int n, std::uint64_t seed);

}  // namespace ugen
