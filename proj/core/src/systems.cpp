#include "ugen/systems.hpp"

#include <stdexcept>
#include <string>

#include "ugen/rng.hpp"

namespace ugen {
namespace {

using PolyMatrix = std::vector<std::vector<MPoly>>;

PolyMatrix poly_zeros(RingPtr ring, int rows, int cols) {
  return PolyMatrix(rows, std::vector<MPoly>(cols, MPoly::zero(ring)));
}

PolyMatrix matmul(const PolyMatrix& A, const PolyMatrix& B) {
  const int n = static_cast<int>(A.size());
  const int m = static_cast<int>(B[0].size());
  const int inner = static_cast<int>(B.size());
  PolyMatrix C = poly_zeros(A[0][0].ring(), n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      MPoly acc = C[i][j];
      for (int l = 0; l < inner; ++l) acc = acc + A[i][l] * B[l][j];
      C[i][j] = std::move(acc);
    }
  return C;
}

PolyMatrix transpose(const PolyMatrix& A) {
  const int n = static_cast<int>(A.size());
  const int m = static_cast<int>(A[0].size());
  PolyMatrix T(m, std::vector<MPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) T[j][i] = A[i][j];
  return T;
}

}  // namespace

PolySystem gen_katsura(int n) {
  if (n < 2) throw std::invalid_argument("gen_katsura: n >= 2");
  std::vector<std::string> names;
  for (int i = 0; i <= n; ++i) names.push_back("x" + std::to_string(i));
  RingPtr ring = Ring::affine(names);

  auto x = [&](int i) { return MPoly::variable(ring, std::abs(i)); };

  std::vector<MPoly> polys;
  // sum_{i=-n}^{n} x_i = 1 folded by x_{-i} = x_i.
  MPoly lin = x(0);
  for (int i = 1; i <= n; ++i) lin = lin + x(i).scaled(Cx(2.0));
  lin.add_term(ExpVec(ring->nvars(), 0), Cx(-1.0));
  polys.push_back(std::move(lin));

  // Convolution relations for m = 0..n-1; terms with |m - l| > n drop out.
  for (int m = 0; m < n; ++m) {
    MPoly q(ring);
    for (int l = -n; l <= n; ++l) {
      const int j = m - l;
      if (j < -n || j > n) continue;
      q = q + x(l) * x(j);
    }
    q = q - x(m);
    polys.push_back(std::move(q));
  }

  PolySystem out(ring, std::move(polys));
  if (out.size() != ring->nvars())
    throw std::logic_error("gen_katsura: system is not square");
  return out;
}

PolySystem gen_cyclic(int n) {
  if (n < 3) throw std::invalid_argument("gen_cyclic: n >= 3");
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  RingPtr ring = Ring::affine(names);

  std::vector<MPoly> polys;
  for (int m = 1; m < n; ++m) {
    MPoly eq(ring);
    for (int i = 0; i < n; ++i) {
      ExpVec e(ring->nvars(), 0);
      for (int j = 0; j < m; ++j) ++e[(i + j) % n];
      eq.add_term(e, Cx(1.0));
    }
    polys.push_back(std::move(eq));
  }
  MPoly prod(ring);
  {
    ExpVec e(ring->nvars(), 1);
    prod.add_term(e, Cx(1.0));
    prod.add_term(ExpVec(ring->nvars(), 0), Cx(-1.0));
  }
  polys.push_back(std::move(prod));
  return PolySystem(ring, std::move(polys));
}

PolySystem gen_banded_quadrics(int n, int k, std::uint64_t seed) {
  if (k < 2 || k > n)
    throw std::invalid_argument("gen_banded_quadrics: need 2 <= k <= n");
  // n equations in n+1 homogeneous coordinates: dropping the last quadric
  // leaves a projective curve for the dropped-equation experiment.
  const int nv = n + 1;
  std::vector<std::string> names;
  for (int i = 0; i < nv; ++i) names.push_back("x" + std::to_string(i));
  RingPtr ring = Ring::affine(names);
  Rng rng(seed ^ 0x62616e64ULL);

  auto coeff = [&]() { return Cx(rng.uniform(), rng.uniform()); };

  std::vector<MPoly> polys;
  {
    MPoly lin(ring);
    for (int i = 0; i < nv; ++i) {
      ExpVec e(ring->nvars(), 0);
      e[i] = 1;
      lin.add_term(e, coeff());
    }
    polys.push_back(std::move(lin));
  }
  for (int i = 1; i < n; ++i) {
    MPoly q(ring);
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= k; ++b) {
        ExpVec e(ring->nvars(), 0);
        ++e[(i + a) % nv];
        ++e[(i + b) % nv];
        q.add_term(e, coeff());
      }
    polys.push_back(std::move(q));
  }
  return PolySystem(ring, std::move(polys));
}

PolySystem gen_mle_symmetric(int n, int r,
                             const std::vector<std::vector<int>>& U) {
  if (r < 1 || r > n) throw std::invalid_argument("gen_mle_symmetric: 1 <= r <= n");
  if (static_cast<int>(U.size()) != n)
    throw std::invalid_argument("gen_mle_symmetric: U must be n x n");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(U[i].size()) != n)
      throw std::invalid_argument("gen_mle_symmetric: U must be n x n");
    for (int j = 0; j < n; ++j) {
      if (U[i][j] != U[j][i])
        throw std::invalid_argument("gen_mle_symmetric: U must be symmetric");
      if (U[i][j] <= 0)
        throw std::invalid_argument("gen_mle_symmetric: U must have positive entries");
    }
  }

  const int s = n - r;
  std::vector<std::string> names;
  std::vector<std::vector<int>> groups;
  std::vector<int> p_idx(r * r, -1), l_idx(s * r, -1), lam_idx(s * s, -1);

  {
    std::vector<int> grp;
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        p_idx[i * r + j] = p_idx[j * r + i] = static_cast<int>(names.size());
        grp.push_back(static_cast<int>(names.size()));
        names.push_back("p" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
      }
    groups.push_back(std::move(grp));
  }
  if (s > 0) {
    std::vector<int> grp_l, grp_w;
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < r; ++b) {
        l_idx[a * r + b] = static_cast<int>(names.size());
        grp_l.push_back(static_cast<int>(names.size()));
        names.push_back("l" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
      }
    groups.push_back(std::move(grp_l));
    for (int a = 0; a < s; ++a)
      for (int b = a; b < s; ++b) {
        lam_idx[a * s + b] = lam_idx[b * s + a] = static_cast<int>(names.size());
        grp_w.push_back(static_cast<int>(names.size()));
        names.push_back("w" + std::to_string(a + 1) + "_" + std::to_string(b + 1));
      }
    groups.push_back(std::move(grp_w));
  }

  RingPtr ring = Ring::make(names, groups);
  const int expected_vars = n * (n + 1) / 2;
  if (ring->nvars() != expected_vars)
    throw std::logic_error("gen_mle_symmetric: variable count is off");

  // P1 with the doubled diagonal, L1 rectangular, Lambda symmetric.
  PolyMatrix P1 = poly_zeros(ring, r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      MPoly v = MPoly::variable(ring, p_idx[i * r + j]);
      P1[i][j] = (i == j) ? v.scaled(Cx(2.0)) : v;
    }
  PolyMatrix L1 = poly_zeros(ring, std::max(s, 1), std::max(r, 1));
  PolyMatrix Lam = poly_zeros(ring, std::max(s, 1), std::max(s, 1));
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < r; ++b) L1[a][b] = MPoly::variable(ring, l_idx[a * r + b]);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      Lam[a][b] = MPoly::variable(ring, lam_idx[a * s + b]);

  // A = [I_r | L1^T] and B = [L1 | I_s] assemble the big matrices
  // P = A^T P1 A and K = B^T Lambda B.
  PolyMatrix A = poly_zeros(ring, r, n);
  for (int i = 0; i < r; ++i) {
    A[i][i] = MPoly::constant(ring, Cx(1.0));
    for (int c = 0; c < s; ++c) A[i][r + c] = L1[c][i];
  }
  PolyMatrix P = matmul(transpose(A), matmul(P1, A));

  PolyMatrix K = poly_zeros(ring, n, n);
  if (s > 0) {
    PolyMatrix B = poly_zeros(ring, s, n);
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < r; ++b) B[a][b] = L1[a][b];
      B[a][r + a] = MPoly::constant(ring, Cx(1.0));
    }
    K = matmul(transpose(B), matmul(Lam, B));
  }

  double sigma_u = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) sigma_u += U[i][j];

  // Entry (i, j) of the score matrix: the data enters with the same
  // doubled-diagonal convention as the probability matrix.
  PolyMatrix M = poly_zeros(ring, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      M[i][j] = P[i][j] * K[i][j] + P[i][j].scaled(Cx(sigma_u));
      const double data = (i == j) ? 2.0 * U[i][i] : 1.0 * U[i][j];
      M[i][j].add_term(ExpVec(ring->nvars(), 0), Cx(-data));
    }

  // Equations: the n column sums, then the entries above the diagonal.
  std::vector<MPoly> polys;
  for (int j = 0; j < n; ++j) {
    MPoly col(ring);
    for (int i = 0; i < n; ++i) col = col + M[i][j];
    polys.push_back(std::move(col));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) polys.push_back(M[i][j]);

  PolySystem out(ring, std::move(polys));
  if (out.size() != expected_vars)
    throw std::logic_error("gen_mle_symmetric: system is not square");
  if (s > 0) {
    const auto deg = out.polys[mle_dropped_equation_index(n)].multidegree();
    if (deg != std::vector<int>{1, 2, 1})
      throw std::logic_error("gen_mle_symmetric: dropped equation degree is off");
  }
  return out;
}

int mle_dropped_equation_index(int n) { return 2 * n - 2; }

std::vector<std::vector<int>> random_count_matrix(int n, std::uint64_t seed) {
  Rng rng(seed ^ 0x636f756e74ULL);
  std::vector<std::vector<int>> U(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const int v = 1 + static_cast<int>(rng.uniform() * 29.0);
      U[i][j] = U[j][i] = v;
    }
  return U;
}

}  // namespace ugen
