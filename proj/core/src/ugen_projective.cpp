#include "ugen/ugen_projective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ugen/univariate.hpp"

namespace ugen {
namespace {

constexpr double kContainTol = 1e-8;

/// Witness points of w that already lie on V(g1), and the rest.
void containment_split(const WitnessSet& w, const MPoly& g1,
                       std::vector<MultiProjPoint>& inside,
                       std::vector<MultiProjPoint>& outside) {
  const double scale = std::max(1.0, g1.coeff_scale());
  for (const auto& p : w.points) {
    const Eigen::VectorXcd x = join_by_groups(p, *w.F.ring);
    if (std::abs(g1.evaluate(x)) <= kContainTol * scale)
      inside.push_back(p);
    else
      outside.push_back(p);
  }
}

}  // namespace

UGenConfig UGenConfig::from_seed(std::uint64_t seed) {
  UGenConfig cfg;
  Rng rng(seed ^ 0x7567656eULL);
  cfg.gamma = rng.unit_complex();
  cfg.g0_gamma = rng.unit_complex();
  cfg.settings.seed = seed;
  return cfg;
}

MPoly make_g0(int d, const MPoly& ell0, int u_var, Cx gamma) {
  if (d < 1) throw std::invalid_argument("make_g0: degree must be >= 1");
  const RingPtr& ring = ell0.ring();
  if (u_var < 0 || u_var >= ring->nvars())
    throw std::invalid_argument("make_g0: cone variable out of range");
  if (ell0.degree_in(u_var) > 0)
    throw std::invalid_argument("make_g0: ell0 must not involve the cone variable");
  MPoly ud = MPoly::variable(ring, u_var, d);
  return (ud - ell0.pow(d)).scaled(gamma);
}

RowHint g0_hint(int d, const MPoly& ell0, int u_var, Cx gamma) {
  RowHint::BinFactor f;
  f.var = u_var;
  f.deg = d;
  f.linear = ell0;
  return RowHint::binomial_cone(gamma, {std::move(f)});
}

WitnessSet u_start_points(const WitnessSet& w, const MPoly& g0) {
  if (w.dim() != 1)
    throw std::invalid_argument("u_start_points: input must be a curve witness set");
  const RingPtr& orig = w.F.ring;
  const RingPtr& cone = g0.ring();
  if (cone->nvars() != orig->nvars() + orig->ngroups() || !cone->has_cone_vars())
    throw std::invalid_argument("u_start_points: g0 does not live in the cone ring");
  const int u_var = cone->cone_var(0);
  const int d = g0.multidegree()[0];

  PolySystem F0(cone, [&] {
    std::vector<MPoly> polys;
    for (const auto& f : w.F.polys) polys.push_back(f.to_ring(cone));
    polys.push_back(g0);
    return polys;
  }());
  std::vector<MPoly> slice;
  for (const auto& l : w.slice) slice.push_back(l.to_ring(cone));

  std::vector<MultiProjPoint> starts;
  starts.reserve(static_cast<size_t>(d) * w.points.size());
  for (size_t i = 0; i < w.points.size(); ++i) {
    // Fix the witness point's coordinates and read off the u-polynomial.
    std::vector<std::pair<int, Cx>> assign;
    const auto& fac = w.points[i].factors[0];
    for (int v = 0; v < orig->nvars(); ++v) {
      const int cv = cone->var_index(orig->var_name(v));
      assign.emplace_back(cv, fac[v]);
    }
    const MPoly spec = g0.specialize(assign);
    std::vector<Cx> coeffs(d + 1, Cx(0.0));
    for (const auto& [e, c] : spec.terms()) {
      for (int v = 0; v < cone->nvars(); ++v)
        if (e[v] > 0 && v != u_var)
          throw std::runtime_error("u_start_points: specialization left extra variables");
      coeffs[e[u_var]] += c;
    }
    std::vector<Cx> roots;
    try {
      roots = univariate_roots(coeffs);
    } catch (const std::exception& e) {
      throw std::runtime_error("u_start_points: root solve failed at witness point " +
                               std::to_string(i) + ": " + e.what());
    }
    if (static_cast<int>(roots.size()) != d)
      throw std::runtime_error("u_start_points: degree drop at witness point " +
                               std::to_string(i));
    for (const Cx& u : roots) {
      Eigen::VectorXcd f(cone->group(0).size());
      const auto& gv = cone->group(0);
      for (size_t j = 0; j < gv.size(); ++j) {
        if (gv[j] == u_var) {
          f[j] = u;
        } else {
          const int ov = orig->var_index(cone->var_name(gv[j]));
          f[j] = fac[ov];
        }
      }
      starts.push_back(normalize(MultiProjPoint(std::move(f))));
    }
  }

  WitnessSet out{std::move(F0), std::move(slice), std::move(starts)};
  out.validate(1e-7);
  return out;
}

std::shared_ptr<EliminatedHomotopy> eliminate_u_mode(const Homotopy& H,
                                                     ElimMode mode,
                                                     double t_star) {
  const RingPtr& ring = H.ring();
  std::vector<EliminatedHomotopy::Substitution> subs;
  for (int g = 0; g < ring->ngroups(); ++g) {
    const int u = ring->cone_var(g);
    if (u < 0) continue;
    EliminatedHomotopy::Substitution s;
    s.var = u;
    if (mode == ElimMode::Chart) {
      int idx = -1;
      for (size_t c = 0; c < H.charts().size(); ++c)
        if (H.charts()[c].degree_in(u) > 0) idx = static_cast<int>(c);
      if (idx < 0)
        throw std::invalid_argument("eliminate: no chart involves the cone variable");
      s.row = H.n_moving_rows() + idx;
      s.defining = H.charts()[idx];
    } else {
      const MPoly u_poly = MPoly::variable(ring, u);
      int idx = -1;
      for (int r = 0; r < H.n_moving_rows(); ++r)
        if (H.target().polys[r] == u_poly) idx = r;
      if (idx < 0)
        throw std::invalid_argument(
            "eliminate: no moving row deforms the slice into the cone variable");
      s.row = idx;
      s.defining = H.start().polys[idx];
    }
    subs.push_back(std::move(s));
  }
  if (subs.empty())
    throw std::invalid_argument("eliminate: the ring has no cone variables");
  return std::make_shared<EliminatedHomotopy>(H, mode, std::move(subs), t_star);
}

std::vector<WitnessSet> intersect_hypersurface(const WitnessSet& w,
                                               const MPoly& g1,
                                               const UGenConfig& cfg,
                                               IntersectDiagnostics* diag) {
  const RingPtr& ring = w.F.ring;
  if (ring->ngroups() != 1)
    throw std::invalid_argument("intersect_hypersurface: single-group input expected");
  if (!g1.ring()->same_structure(*ring))
    throw std::invalid_argument("intersect_hypersurface: g1 over a different ring");

  IntersectDiagnostics local;
  std::vector<WitnessSet> out;

  std::vector<MultiProjPoint> inside, outside;
  containment_split(w, g1, inside, outside);
  local.witness_points_in_g1 = static_cast<int>(inside.size());

  if (!inside.empty()) {
    WitnessSet same{w.F, w.slice, std::move(inside)};
    out.push_back(std::move(same));
  }

  if (w.dim() >= 1 && !outside.empty()) {
    // Reduce to the curve: keep all but the last slice linear as equations.
    MPoly ell = w.slice.back();
    std::vector<MPoly> kept_slices(w.slice.begin(), w.slice.end() - 1);
    std::vector<MPoly> FZ = w.F.polys;
    for (const auto& l : kept_slices) FZ.push_back(l);
    WitnessSet wZ{PolySystem(ring, FZ), {ell}, outside};

    const int d = g1.multidegree()[0];
    Rng rng(cfg.settings.seed ^ 0x675f30ULL);

    const RingPtr cone = ring->with_cone_vars();
    const int u_var = cone->cone_var(0);

    // ell0 for g0, fixed by the config or drawn until it avoids the points.
    MPoly ell0(cone);
    if (cfg.ell0.has_value()) {
      ell0 = cfg.ell0->to_ring(cone);
    } else {
      for (int tries = 0;; ++tries) {
        ell0 = draw_group_linear(cone->without_cone_vars(), 0, rng).to_ring(cone);
        bool ok = true;
        for (const auto& p : outside) {
          Eigen::VectorXcd x = join_by_groups(p, *ring);
          Eigen::VectorXcd xc = Eigen::VectorXcd::Zero(cone->nvars());
          for (int v = 0; v < ring->nvars(); ++v)
            xc[cone->var_index(ring->var_name(v))] = x[v];
          if (std::abs(ell0.evaluate(xc)) < 1e-6) ok = false;
        }
        if (ok) break;
        if (tries > 64)
          throw std::runtime_error("intersect: no ell0 avoiding the witness points");
      }
    }
    const MPoly g0 = make_g0(d, ell0, u_var, cfg.g0_gamma);

    const WitnessSet w0 = u_start_points(wZ, g0);
    local.start_count = w0.size();

    // Cone homotopy rows: (F, L', g0, ell) ~> (F, L', g1, u), plus a chart.
    std::vector<MPoly> start_rows, target_rows;
    std::vector<RowHint> hints;
    for (const auto& f : FZ) {
      start_rows.push_back(f.to_ring(cone));
      target_rows.push_back(start_rows.back());
      hints.push_back(RowHint::none());
    }
    start_rows.push_back(g0);
    target_rows.push_back(g1.to_ring(cone));
    hints.push_back(g0_hint(d, ell0, u_var, cfg.g0_gamma));
    start_rows.push_back(ell.to_ring(cone));
    target_rows.push_back(MPoly::variable(cone, u_var));
    hints.push_back(RowHint::none());

    const auto charts = draw_charts(cone, rng);
    const PolySystem start_sys(cone, std::move(start_rows));
    const PolySystem target_sys(cone, std::move(target_rows));

    std::vector<Eigen::VectorXcd> starts;
    starts.reserve(w0.points.size());
    for (const auto& p : w0.points) starts.push_back(to_chart(p, charts, *cone));
    local.paths_tracked = static_cast<int>(starts.size());

    // Endpoints lie over u = 0; project the u-coordinate away. A pass with a
    // failed path or a merged pair of endpoints is rerun whole under a fresh
    // gamma and the results are pooled.
    const int u_pos = [&] {
      const auto& gv = cone->group(0);
      for (size_t j = 0; j < gv.size(); ++j)
        if (gv[j] == u_var) return static_cast<int>(j);
      return -1;
    }();
    std::vector<MultiProjPoint> projected;
    int passes = 0;
    size_t union_size = 0;
    for (int pass = 0; pass <= cfg.settings.max_rescue_passes; ++pass) {
      const Cx gamma = (pass == 0) ? cfg.gamma : rng.unit_complex();
      Homotopy H = make_straight_line(start_sys, target_sys, gamma, charts, hints);
      std::shared_ptr<EliminatedHomotopy> elim;
      if (cfg.eliminate_u)
        elim = eliminate_u_mode(H, cfg.elim_mode, cfg.elim_t_star);
      const auto results = track_batch_eliminated(
          H, elim, cfg.elim_t_star, starts, cfg.settings, 0.0, cone.get());
      ++passes;
      for (const auto& r : results) {
        // Singular-labeled endpoints stay in the candidate pool; the residual
        // and regularity screen below decides their fate.
        const bool candidate = (r.status == PathStatus::Success ||
                                r.status == PathStatus::Singular) &&
                               r.endpoint.nfactors() > 0;
        if (!candidate) {
          if (pass == 0) ++local.failures;
          continue;
        }
        const auto& f = r.endpoint.factors[0];
        if (std::abs(f[u_pos]) >= cfg.settings.infinity_threshold) {
          if (pass == 0) ++local.at_infinity;
          continue;
        }
        Eigen::VectorXcd proj(f.size() - 1);
        int j = 0;
        for (int v = 0; v < f.size(); ++v)
          if (v != u_pos) proj[j++] = f[v];
        if (pass == 0) ++local.successes;
        projected.push_back(normalize(MultiProjPoint(std::move(proj))));
      }
      if (!batch_anomalous(results, cfg.settings.dedup_tol,
                           /*ignore_late_failures=*/false))
        break;
      const size_t now = dedup_endpoints(projected, cfg.settings.dedup_tol).size();
      if (pass > 0 && now == union_size) break;  // pooled endpoints saturated
      union_size = now;
    }
    if (passes > 1)
      local.note = "intersection used " + std::to_string(passes) + " gamma passes";

    auto deduped =
        dedup_endpoints(projected, cfg.settings.dedup_tol, &local.cluster_sizes);

    // Keep only regular points that indeed satisfy (F, g1).
    std::vector<MPoly> Fnew = w.F.polys;
    Fnew.push_back(g1);
    PolySystem Fsys(ring, Fnew);
    std::vector<MultiProjPoint> kept;
    for (auto& p : deduped) {
      const Eigen::VectorXcd x = join_by_groups(p, *ring);
      bool ok = true;
      for (const auto& f : Fsys.polys) {
        const double scale = std::max(1.0, f.coeff_scale());
        if (std::abs(f.evaluate(x)) > 1e-6 * scale) ok = false;
      }
      if (ok && !is_isolated_regular(Fsys, x)) ok = false;
      if (ok) kept.push_back(std::move(p));
    }

    if (local.failures > 0) {
      local.warning = true;
      local.note = "intersect: " + std::to_string(local.failures) + " failed paths";
    }
    if (local.paths_tracked > 0 && kept.empty() && inside.empty())
      throw std::runtime_error("intersect_hypersurface: all paths failed");

    if (!kept.empty()) {
      WitnessSet lower{std::move(Fsys), std::move(kept_slices), std::move(kept)};
      lower.validate(1e-6);
      out.push_back(std::move(lower));
    }
  }

  if (diag) *diag = local;
  return out;
}

std::vector<WitnessSet> cascade(const PolySystem& F, const UGenConfig& cfg,
                                std::vector<IntersectDiagnostics>* diags) {
  const RingPtr& ring = F.ring;
  if (ring->ngroups() != 1)
    throw std::invalid_argument("cascade: single-group systems only");
  if (!F.is_group_homogeneous())
    throw std::invalid_argument("cascade: input must be homogeneous");

  const int n = ring->nvars() - 1;
  Rng rng(cfg.settings.seed ^ 0x63617363ULL);

  // Witness set of a point describing the ambient projective space.
  std::vector<MPoly> slices;
  Eigen::MatrixXcd A(n, ring->nvars());
  for (int i = 0; i < n; ++i) {
    slices.push_back(draw_group_linear(ring, 0, rng));
    Eigen::VectorXcd c(ring->nvars());
    for (int v = 0; v < ring->nvars(); ++v) c[v] = Cx(0.0);
    for (const auto& [e, k] : slices.back().terms())
      for (int v = 0; v < ring->nvars(); ++v)
        if (e[v] > 0) c[v] = k;
    A.row(i) = c.transpose();
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  const Eigen::MatrixXcd kernel = lu.kernel();
  if (kernel.cols() != 1)
    throw std::runtime_error("cascade: degenerate initial slice");
  MultiProjPoint pt = normalize(MultiProjPoint(Eigen::VectorXcd(kernel.col(0))));

  std::vector<WitnessSet> C;
  C.push_back(WitnessSet{PolySystem(ring, {}), slices, {pt}});

  for (int i = 0; i < F.size(); ++i) {
    std::vector<WitnessSet> next;
    for (const auto& w : C) {
      UGenConfig round_cfg = cfg;
      round_cfg.settings.seed =
          rng.child_seed(static_cast<std::uint64_t>(i) * 64 + next.size());
      IntersectDiagnostics d;
      auto pieces = intersect_hypersurface(w, F.polys[i], round_cfg, &d);
      if (diags) diags->push_back(d);
      for (auto& piece : pieces)
        if (!piece.points.empty()) next.push_back(std::move(piece));
    }
    if (next.size() > 1) next = eliminate_redundant(std::move(next), cfg.settings);
    C = std::move(next);
    if (C.empty()) break;
  }
  return C;
}

std::vector<WitnessSet> eliminate_redundant(std::vector<WitnessSet> C,
                                            const TrackerSettings& settings) {
  // Deterministic scan order: descending dimension, then insertion order.
  std::vector<int> order(C.size());
  for (size_t i = 0; i < C.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return C[a].dim() > C[b].dim();
  });

  std::vector<bool> erased(C.size(), false);
  for (int idx : order) {
    const WitnessSet& w = C[idx];
    for (int other : order) {
      if (other == idx || erased[other]) continue;
      if (C[other].dim() < w.dim()) continue;
      bool all_member = !w.points.empty();
      for (const auto& p : w.points) {
        if (!membership(C[other], p, settings)) {
          all_member = false;
          break;
        }
      }
      if (all_member) {
        erased[idx] = true;
        break;
      }
    }
  }
  std::vector<WitnessSet> out;
  for (size_t i = 0; i < C.size(); ++i)
    if (!erased[i]) out.push_back(std::move(C[i]));
  return out;
}

}  // namespace ugen
