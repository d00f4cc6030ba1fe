#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ugen/mpoly.hpp"

namespace ugen {

/// Optional factored structure of a start row, used to evaluate cheaply
/// without touching the expanded form. The expanded MPoly stays the source of
/// truth for degrees and printing.
struct RowHint {
  enum class Kind { None, LinearProduct, BinomialCone };

  Kind kind = Kind::None;

  /// LinearProduct: the row is the product of these degree-<=1 polys.
  std::vector<MPoly> linear_factors;

  /// BinomialCone: the row is scale * prod_f (x_{var_f}^{deg_f} - linear_f^{deg_f}).
  struct BinFactor {
    int var = -1;
    int deg = 0;
    MPoly linear;
  };
  Cx scale{1.0, 0.0};
  std::vector<BinFactor> bin_factors;

  static RowHint none() { return {}; }
  static RowHint product(std::vector<MPoly> factors);
  static RowHint binomial_cone(Cx scale, std::vector<BinFactor> factors);
};

/// Evaluation interface consumed by the path tracker: a square one-parameter
/// family H(x, t) with values, x-Jacobian and t-derivative, any subset
/// computed in one pass.
class HomotopyBase {
 public:
  virtual ~HomotopyBase() = default;

  /// Number of rows.
  virtual int dim() const = 0;
  /// Number of coordinates; equal to dim() for tracked systems.
  virtual int nvars() const = 0;

  virtual void eval_all(const Eigen::VectorXcd& x, double t,
                        Eigen::VectorXcd* H, Eigen::MatrixXcd* J,
                        Eigen::VectorXcd* dHdt) const = 0;

  void eval(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd& out) const {
    eval_all(x, t, &out, nullptr, nullptr);
  }
  void eval_jacobian(const Eigen::VectorXcd& x, double t,
                     Eigen::MatrixXcd& out) const {
    eval_all(x, t, nullptr, &out, nullptr);
  }
  void eval_dt(const Eigen::VectorXcd& x, double t,
               Eigen::VectorXcd& out) const {
    eval_all(x, t, nullptr, nullptr, &out);
  }

  /// Smallest t the family is defined at (eliminated forms may not reach 0).
  virtual double t_min() const { return 0.0; }
};

/// The straight-line family H(x,t) = (1-t) gamma start(x) + t target(x),
/// augmented with chart equations held fixed in t. Rows whose start and
/// target polynomials coincide are evaluated once and scaled.
class Homotopy final : public HomotopyBase {
 public:
  Homotopy(PolySystem start, PolySystem target, Cx gamma,
           std::vector<MPoly> charts, std::vector<RowHint> start_hints = {});

  int dim() const override;
  int nvars() const override { return start_.ring->nvars(); }
  void eval_all(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd* H,
                Eigen::MatrixXcd* J, Eigen::VectorXcd* dHdt) const override;

  const PolySystem& start() const { return start_; }
  const PolySystem& target() const { return target_; }
  const std::vector<MPoly>& charts() const { return charts_; }
  Cx gamma() const { return gamma_; }
  const RingPtr& ring() const { return start_.ring; }

  int n_moving_rows() const { return start_.size(); }

 private:
  PolySystem start_;
  PolySystem target_;
  Cx gamma_;
  std::vector<MPoly> charts_;

  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Builds the straight-line homotopy, validating that start and target have
/// equal length and componentwise matching per-group degrees, and that gamma
/// has unit modulus. Throws std::invalid_argument otherwise.
Homotopy make_straight_line(PolySystem start, PolySystem target, Cx gamma,
                            std::vector<MPoly> charts = {},
                            std::vector<RowHint> start_hints = {});

enum class ElimMode { Chart, HomotopyEquation };

/// A homotopy with cone variables eliminated by substitution. Mode Chart
/// solves each factor's chart equation for the cone variable; mode
/// HomotopyEquation solves the moving slice row (1-t) gamma ell + t u = 0,
/// which has no solution for u at t = 0 and is guarded by t_star.
class EliminatedHomotopy final : public HomotopyBase {
 public:
  struct Substitution {
    int var = -1;   // eliminated variable (full-ring index)
    int row = -1;   // dropped row index in the full homotopy
    MPoly defining; // the chart polynomial, or the slice linear ell
  };

  EliminatedHomotopy(Homotopy full, ElimMode mode,
                     std::vector<Substitution> subs, double t_star);

  int dim() const override;
  int nvars() const override { return static_cast<int>(kept_.size()); }
  void eval_all(const Eigen::VectorXcd& x, double t, Eigen::VectorXcd* H,
                Eigen::MatrixXcd* J, Eigen::VectorXcd* dHdt) const override;
  double t_min() const override {
    return mode_ == ElimMode::HomotopyEquation ? t_star_ : 0.0;
  }

  ElimMode mode() const { return mode_; }
  const Homotopy& full() const { return full_; }

  /// Drops the eliminated coordinates from a full-ring vector.
  Eigen::VectorXcd reduce_point(const Eigen::VectorXcd& x_full) const;

  /// Reconstructs the full-ring vector, computing each eliminated coordinate
  /// from its defining equation at parameter t.
  Eigen::VectorXcd lift_point(const Eigen::VectorXcd& x_red, double t) const;

  /// Full-ring variable index of each reduced coordinate.
  const std::vector<int>& kept_vars() const { return kept_; }

 private:
  void substitution_values(const Eigen::VectorXcd& x_full, double t,
                           std::vector<Cx>& u, std::vector<Cx>& du_dt) const;

  Homotopy full_;
  ElimMode mode_;
  std::vector<Substitution> subs_;
  double t_star_;
  std::vector<int> kept_;       // full-ring indices of kept coordinates
  std::vector<int> kept_rows_;  // full-system row indices that remain
  // Dense coefficients of each defining equation over the full ring.
  std::vector<Eigen::VectorXcd> def_coeffs_;
  std::vector<Cx> def_const_;
};

}  // namespace ugen
