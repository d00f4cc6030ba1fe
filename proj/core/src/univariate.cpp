#include "ugen/univariate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ugen {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Horner evaluation of p and p' at z.
void eval_poly(const std::vector<Cx>& c, Cx z, Cx& p, Cx& dp) {
  const int d = static_cast<int>(c.size()) - 1;
  p = c[d];
  dp = Cx(0.0);
  for (int k = d - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
}

/// Scale of |p| at radius |z|, for residual acceptance.
double poly_scale(const std::vector<Cx>& c, double r) {
  double s = 0.0;
  double rk = 1.0;
  for (const auto& ck : c) {
    s += std::abs(ck) * rk;
    rk *= std::max(r, 1e-30);
  }
  return std::max(s, 1e-300);
}

std::vector<Cx> binomial_roots(Cx lead, Cx constant, int d) {
  // lead u^d + constant = 0  =>  u^d = -constant/lead
  const Cx w = -constant / lead;
  const double r = std::pow(std::abs(w), 1.0 / d);
  const double base = std::arg(w) / d;
  std::vector<Cx> roots(d);
  for (int k = 0; k < d; ++k) {
    const double th = base + kTwoPi * k / d;
    roots[k] = Cx(r * std::cos(th), r * std::sin(th));
  }
  return roots;
}

}  // namespace

std::vector<Cx> univariate_roots(const std::vector<Cx>& coeffs, double tol) {
  int d = static_cast<int>(coeffs.size()) - 1;
  if (d < 1) throw std::invalid_argument("univariate_roots: degree must be >= 1");
  if (coeffs[d] == Cx(0.0))
    throw std::invalid_argument("univariate_roots: zero leading coefficient");

  // Strip trailing zero constant terms: u = 0 roots split off exactly.
  std::vector<Cx> c = coeffs;
  std::vector<Cx> roots;
  while (c.size() > 1 && c[0] == Cx(0.0)) {
    roots.push_back(Cx(0.0));
    c.erase(c.begin());
  }
  d = static_cast<int>(c.size()) - 1;
  if (d == 0) return roots;

  if (d == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  bool binomial = true;
  for (int k = 1; k < d; ++k)
    if (c[k] != Cx(0.0)) binomial = false;
  if (binomial) {
    auto b = binomial_roots(c[d], c[0], d);
    roots.insert(roots.end(), b.begin(), b.end());
    return roots;
  }

  // Aberth-Ehrlich from a spread circle; radius from the Fujiwara-style bound.
  double radius = 0.0;
  for (int k = 0; k < d; ++k) {
    const double a = std::abs(c[k] / c[d]);
    if (a > 0.0) radius = std::max(radius, 2.0 * std::pow(a, 1.0 / (d - k)));
  }
  if (radius == 0.0) radius = 1.0;
  std::vector<Cx> z(d);
  for (int k = 0; k < d; ++k) {
    const double th = kTwoPi * k / d + 0.4;
    z[k] = radius * Cx(std::cos(th), std::sin(th));
  }

  const int max_iters = 400;
  std::vector<Cx> w(d);
  bool converged = false;
  for (int iter = 0; iter < max_iters && !converged; ++iter) {
    converged = true;
    for (int i = 0; i < d; ++i) {
      Cx p, dp;
      eval_poly(c, z[i], p, dp);
      const double scale = poly_scale(c, std::abs(z[i]));
      if (std::abs(p) <= 1e-3 * tol * scale) {
        w[i] = Cx(0.0);
        continue;
      }
      Cx newton;
      if (dp == Cx(0.0)) {
        newton = Cx(std::abs(p), 0.0);  // nudge off the critical point
      } else {
        newton = p / dp;
      }
      Cx repel(0.0);
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        const Cx diff = z[i] - z[j];
        if (diff == Cx(0.0)) continue;
        repel += Cx(1.0) / diff;
      }
      const Cx denom = Cx(1.0) - newton * repel;
      w[i] = (denom == Cx(0.0)) ? newton : newton / denom;
      if (std::abs(w[i]) > 1e-14 * (1.0 + std::abs(z[i]))) converged = false;
    }
    for (int i = 0; i < d; ++i) z[i] -= w[i];
  }

  double worst = 0.0;
  for (int i = 0; i < d; ++i) {
    Cx p, dp;
    eval_poly(c, z[i], p, dp);
    worst = std::max(worst, std::abs(p) / poly_scale(c, std::abs(z[i])));
  }
  if (worst > tol)
    throw std::runtime_error(
        "univariate_roots: no convergence, worst scaled residual " +
        std::to_string(worst));

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

}  // namespace ugen
