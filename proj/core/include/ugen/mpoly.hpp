#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ugen/complex.hpp"
#include "ugen/ring.hpp"

namespace ugen {

using ExpVec = std::vector<std::uint8_t>;

/// Graded lexicographic order: first by total degree, then lexicographically.
struct GradedLexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const;
};

/// Sparse multivariate polynomial with complex coefficients over a Ring.
/// Terms are kept in graded-lex order with no explicit zero coefficients;
/// instances are immutable once built by the arithmetic below.
class MPoly {
 public:
  using TermMap = std::map<ExpVec, Cx, GradedLexLess>;

  MPoly() = default;
  explicit MPoly(RingPtr ring) : ring_(std::move(ring)) {}

  static MPoly zero(RingPtr ring) { return MPoly(std::move(ring)); }
  static MPoly constant(RingPtr ring, Cx c);
  static MPoly variable(RingPtr ring, int var, int power = 1);
  /// c0 + sum coeffs[i] * x_i  (coeffs indexed by ring variable).
  static MPoly linear(RingPtr ring, std::span<const Cx> coeffs, Cx c0 = Cx(0));
  /// Linear form supported on a single group's variables.
  static MPoly group_linear(RingPtr ring, int group, std::span<const Cx> coeffs,
                            Cx c0 = Cx(0));

  const RingPtr& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int num_terms() const { return static_cast<int>(terms_.size()); }

  /// Adds c * x^exp, collecting and dropping cancelled terms.
  void add_term(const ExpVec& exp, Cx c);

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator*(const MPoly& o) const;
  MPoly operator-() const;
  MPoly scaled(Cx c) const;
  MPoly pow(int e) const;

  bool operator==(const MPoly& o) const;

  Cx evaluate(std::span<const Cx> x) const;
  Cx evaluate(const Eigen::VectorXcd& x) const;

  MPoly derivative(int var) const;

  /// Per-group degree vector (max over terms of the group degree sum).
  /// Throws on the zero polynomial.
  std::vector<int> multidegree() const;
  int total_degree() const;
  int degree_in(int var) const;

  /// True when every term attains the same per-group degree vector.
  bool is_group_homogeneous() const;

  /// Substitutes constants for the given variables (index -> value); the
  /// result stays in the same ring.
  MPoly specialize(const std::vector<std::pair<int, Cx>>& assignments) const;

  /// Recast into another ring; var_map[v] is the image of variable v. Missing
  /// entries (var_map[v] < 0) require the variable to be absent from the
  /// support.
  MPoly to_ring(RingPtr target, const std::vector<int>& var_map) const;

  /// Recast matching variables by name; every used variable must exist in the
  /// target ring.
  MPoly to_ring(RingPtr target) const;

  /// Sum of coefficient magnitudes; a residual scale for points of unit norm.
  double coeff_scale() const;

  std::string to_string() const;

 private:
  RingPtr ring_;
  TermMap terms_;
};

/// Parses the polynomial text grammar: identifiers for variables, `*`, `^`,
/// `+`, `-`, real literals and complex coefficients written `(re+im*i)`.
/// Round-trips MPoly::to_string bit-exactly on canonical form.
MPoly parse_poly(RingPtr ring, const std::string& text);

/// Homogenizes per group using each group's homogenizing variable; the target
/// ring must extend p's ring by the homogenizers.
MPoly homogenize(const MPoly& p, RingPtr target);

/// Sets every homogenizing variable to 1 and recasts into `target`.
MPoly dehomogenize(const MPoly& p, RingPtr target);

/// An ordered list of polynomials over one shared ring.
struct PolySystem {
  RingPtr ring;
  std::vector<MPoly> polys;

  PolySystem() = default;
  PolySystem(RingPtr r, std::vector<MPoly> p);

  int size() const { return static_cast<int>(polys.size()); }

  Eigen::VectorXcd evaluate(const Eigen::VectorXcd& x) const;

  /// Partial derivative matrix evaluated at x (rows: polynomials, columns:
  /// ring variables). Derivatives are formed symbolically once and cached.
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& x) const;

  const std::vector<std::vector<MPoly>>& jacobian_polys() const;

  /// Per-group degree vector of each polynomial.
  std::vector<std::vector<int>> multidegrees() const;

  bool is_group_homogeneous() const;

 private:
  mutable std::shared_ptr<const std::vector<std::vector<MPoly>>> jac_cache_;
};

/// Whole-system homogenization; returns the system over ring->with_homogenizers().
PolySystem homogenize_system(const PolySystem& F);

Cx evaluate(const MPoly& p, std::span<const Cx> x);
Eigen::MatrixXcd jacobian(const PolySystem& F, const Eigen::VectorXcd& x);

}  // namespace ugen
