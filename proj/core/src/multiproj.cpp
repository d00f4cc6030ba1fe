#include "ugen/multiproj.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ugen/univariate.hpp"

namespace ugen {
namespace {

constexpr double kContainTol = 1e-8;

/// A group linear avoiding the given witness points of its own group.
MPoly draw_avoiding_linear(const RingPtr& ring, int group,
                           const std::vector<const WitnessSet*>& sets,
                           Rng& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    MPoly cand = draw_group_linear(ring, group, rng);
    bool ok = true;
    for (const auto* w : sets) {
      for (const auto& p : w->points) {
        const Eigen::VectorXcd x = join_by_groups(p, *ring);
        if (std::abs(cand.evaluate(x)) < 1e-6) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) return cand;
  }
  throw std::runtime_error("make_g0_multi: no linear avoiding the witness points");
}

int group_of_linear(const MPoly& lin) {
  const auto deg = lin.multidegree();
  int g = -1;
  for (int i = 0; i < static_cast<int>(deg.size()); ++i) {
    if (deg[i] == 0) continue;
    if (deg[i] != 1 || g >= 0)
      throw std::invalid_argument("expected a single-group linear");
    g = i;
  }
  if (g < 0) throw std::invalid_argument("expected a nonconstant linear");
  return g;
}

}  // namespace

DoubleConeSystem make_double_cone(const PolySystem& F) {
  DoubleConeSystem cone;
  cone.original_ring = F.ring;
  cone.extended_ring = F.ring->with_cone_vars();
  std::vector<MPoly> polys;
  polys.reserve(F.polys.size());
  for (const auto& p : F.polys) polys.push_back(p.to_ring(cone.extended_ring));
  cone.F_tilde = PolySystem(cone.extended_ring, std::move(polys));
  return cone;
}

MultiUGenConfig MultiUGenConfig::from_seed(std::uint64_t seed) {
  MultiUGenConfig cfg;
  Rng rng(seed ^ 0x6d756c7469ULL);
  cfg.gamma = rng.unit_complex();
  cfg.g0_gamma = rng.unit_complex();
  cfg.settings.seed = seed;
  return cfg;
}

MPoly make_g0_multi(const std::vector<int>& multidegree,
                    const std::vector<std::vector<MPoly>>& linears, Cx gamma,
                    G0Variant variant, const DoubleConeSystem& cone,
                    RowHint* hint) {
  const RingPtr& ext = cone.extended_ring;
  const int k = ext->ngroups();
  if (static_cast<int>(multidegree.size()) != k ||
      static_cast<int>(linears.size()) != k)
    throw std::invalid_argument("make_g0_multi: one degree and linear list per group");

  MPoly g0 = MPoly::constant(ext, gamma);
  std::vector<RowHint::BinFactor> bin_factors;
  std::vector<MPoly> lin_factors;

  for (int g = 0; g < k; ++g) {
    const int d = multidegree[g];
    if (d == 0) continue;
    const int u = ext->cone_var(g);
    const int need = (variant == G0Variant::Binomial) ? 1 : d;
    if (static_cast<int>(linears[g].size()) < need)
      throw std::invalid_argument("make_g0_multi: missing linears for group " +
                                  std::to_string(g));
    for (int j = 0; j < need; ++j) {
      const MPoly lin = linears[g][j].to_ring(ext);
      if (group_of_linear(lin) != g)
        throw std::invalid_argument("make_g0_multi: linear in the wrong group");
      if (lin.degree_in(u) > 0)
        throw std::invalid_argument("make_g0_multi: linear involves a cone variable");
    }
    if (variant == G0Variant::Binomial) {
      const MPoly lin = linears[g][0].to_ring(ext);
      g0 = g0 * (MPoly::variable(ext, u, d) - lin.pow(d));
      RowHint::BinFactor f;
      f.var = u;
      f.deg = d;
      f.linear = lin;
      bin_factors.push_back(std::move(f));
    } else {
      for (int j = 0; j < d; ++j) {
        const MPoly lin = linears[g][j].to_ring(ext);
        const MPoly factor = MPoly::variable(ext, u) - lin;
        g0 = g0 * factor;
        lin_factors.push_back(factor);
      }
    }
  }

  if (hint) {
    if (variant == G0Variant::Binomial) {
      *hint = RowHint::binomial_cone(gamma, std::move(bin_factors));
    } else {
      // Fold gamma into the first factor so the product form matches.
      if (!lin_factors.empty()) lin_factors[0] = lin_factors[0].scaled(gamma);
      *hint = RowHint::product(std::move(lin_factors));
    }
  }
  return g0;
}

long expected_path_count(const std::vector<int>& X_multidegree,
                         const std::vector<int>& g1_multidegree) {
  if (X_multidegree.size() != g1_multidegree.size())
    throw std::invalid_argument("expected_path_count: group count mismatch");
  long total = 0;
  for (size_t g = 0; g < X_multidegree.size(); ++g)
    total += static_cast<long>(g1_multidegree[g]) * X_multidegree[g];
  return total;
}

std::vector<MultiProjPoint> u_multiproj_start_points(
    const std::vector<WitnessSet>& directional, const MPoly& g0, double epsilon,
    Cx gamma, const DoubleConeSystem& cone,
    const std::vector<int>& g1_multidegree, MultiStartDiagnostics* diag) {
  const RingPtr& orig = cone.original_ring;
  const RingPtr& ext = cone.extended_ring;
  const int k = orig->ngroups();
  if (static_cast<int>(directional.size()) != k)
    throw std::invalid_argument("start points: one directional witness set per group");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("start points: epsilon in (0, 1)");

  MultiStartDiagnostics local;
  std::vector<MultiProjPoint> out;

  for (int g = 0; g < k; ++g) {
    const int d = g1_multidegree[g];
    if (d == 0 || directional[g].points.empty()) continue;
    const int u_g = ext->cone_var(g);

    for (size_t pi = 0; pi < directional[g].points.size(); ++pi) {
      const auto& P = directional[g].points[pi];
      // Specialize g0 to this witness point: factor g keeps its original
      // coordinates, every other factor sits at its cone vertex [1 : 0].
      std::vector<std::pair<int, Cx>> assign;
      for (int j = 0; j < k; ++j) {
        const auto& jv = orig->group(j);
        for (size_t c = 0; c < jv.size(); ++c) {
          const int ev = ext->var_index(orig->var_name(jv[c]));
          assign.emplace_back(ev, j == g ? P.factors[j][c] : Cx(0.0));
        }
        if (j != g) assign.emplace_back(ext->cone_var(j), Cx(1.0));
      }
      const MPoly spec = g0.specialize(assign);
      std::vector<Cx> coeffs(d + 1, Cx(0.0));
      for (const auto& [e, c] : spec.terms()) {
        for (int v = 0; v < ext->nvars(); ++v)
          if (e[v] > 0 && v != u_g)
            throw std::runtime_error("start points: specialization left variables");
        coeffs[e[u_g]] += c;
      }
      if (coeffs[d] == Cx(0.0))
        throw std::runtime_error(
            "start points: degenerate g0 specialization in group " +
            std::to_string(g) + " (degree drop)");
      const auto roots = univariate_roots(coeffs);

      // The diverging cone coordinates of the other factors follow their
      // slice rows: (1 - eps) gamma ell_j + eps u_j = 0.
      std::vector<Cx> u_other(k, Cx(0.0));
      for (int j = 0; j < k; ++j) {
        if (j == g) continue;
        const Eigen::VectorXcd xo = join_by_groups(P, *orig);
        const Cx lval = directional[j].slice[0].evaluate(xo);
        u_other[j] = -(1.0 - epsilon) * gamma * lval / epsilon;
      }

      // Cone variables are appended to each group, so the first coordinates
      // of an extended factor are the original ones in order.
      for (const Cx& u : roots) {
        MultiProjPoint q;
        q.factors.resize(k);
        for (int j = 0; j < k; ++j) {
          const auto& jv = ext->group(j);
          Eigen::VectorXcd f(jv.size());
          for (size_t c = 0; c < jv.size(); ++c) {
            if (jv[c] == ext->cone_var(j))
              f[c] = (j == g) ? u : u_other[j];
            else
              f[c] = P.factors[j][c];
          }
          q.factors[j] = std::move(f);
        }
        out.push_back(normalize(q));
        ++local.emitted;
      }
    }
  }
  if (diag) *diag = local;
  return out;
}

std::shared_ptr<EliminatedHomotopy> eliminate_cone_vars(const Homotopy& H,
                                                        ElimMode mode,
                                                        double t_star) {
  return eliminate_u_mode(H, mode, t_star);
}

WitnessSet intersect_curve_multi(const std::vector<WitnessSet>& directional,
                                 const MPoly& g1, const MultiUGenConfig& cfg,
                                 MultiIntersectDiagnostics* diag) {
  if (directional.empty())
    throw std::invalid_argument("intersect_curve_multi: no directional sets");
  const RingPtr& ring = directional[0].F.ring;
  const int k = ring->ngroups();
  if (static_cast<int>(directional.size()) != k)
    throw std::invalid_argument("intersect_curve_multi: need one set per group");
  if (!g1.ring()->same_structure(*ring))
    throw std::invalid_argument("intersect_curve_multi: g1 over a different ring");

  MultiIntersectDiagnostics local;
  const auto d = g1.multidegree();
  const PolySystem& F = directional[0].F;

  // Containment filter: witness points already on V(g1) are not tracked.
  std::vector<WitnessSet> outside(directional);
  const double scale = std::max(1.0, g1.coeff_scale());
  for (auto& w : outside) {
    std::vector<MultiProjPoint> keep;
    for (const auto& p : w.points) {
      const Eigen::VectorXcd x = join_by_groups(p, *ring);
      if (std::abs(g1.evaluate(x)) > kContainTol * scale) keep.push_back(p);
    }
    w.points = std::move(keep);
  }

  std::vector<int> degX(k);
  for (int g = 0; g < k; ++g) degX[g] = outside[g].size();
  local.expected_paths = expected_path_count(degX, d);

  const DoubleConeSystem cone = make_double_cone(F);
  const RingPtr& ext = cone.extended_ring;
  Rng rng(cfg.settings.seed ^ 0x6d675f30ULL);

  // g0 with linears that avoid every witness point of their group.
  std::vector<std::vector<MPoly>> g0_linears(k);
  std::vector<const WitnessSet*> all_sets;
  for (const auto& w : outside) all_sets.push_back(&w);
  for (int g = 0; g < k; ++g) {
    const int need = (cfg.g0_variant == G0Variant::Binomial) ? 1 : d[g];
    for (int j = 0; j < need && d[g] > 0; ++j)
      g0_linears[g].push_back(draw_avoiding_linear(ring, g, all_sets, rng));
  }
  RowHint g0_row_hint;
  const MPoly g0 =
      make_g0_multi(d, g0_linears, cfg.g0_gamma, cfg.g0_variant, cone, &g0_row_hint);

  // Homotopy rows: F fixed, g0 ~> g1, and per group ell_g ~> u_g.
  std::vector<MPoly> start_rows, target_rows;
  std::vector<RowHint> hints;
  for (const auto& f : cone.F_tilde.polys) {
    start_rows.push_back(f);
    target_rows.push_back(f);
    hints.push_back(RowHint::none());
  }
  start_rows.push_back(g0);
  target_rows.push_back(g1.to_ring(ext));
  hints.push_back(g0_row_hint);
  for (int g = 0; g < k; ++g) {
    start_rows.push_back(outside[g].slice[0].to_ring(ext));
    target_rows.push_back(MPoly::variable(ext, ext->cone_var(g)));
    hints.push_back(RowHint::none());
  }
  const auto charts = draw_charts(ext, rng);
  const PolySystem start_sys(ext, std::move(start_rows));
  const PolySystem target_sys(ext, std::move(target_rows));

  // Approximate start points, chart scaling, polish at t = epsilon, tracking.
  // The start asymptotics depend on gamma, so rescue passes rebuild them and
  // the pooled endpoints are deduplicated at the end.
  std::vector<MultiProjPoint> projected;
  int passes = 0;
  size_t union_size = 0;
  for (int pass = 0; pass <= cfg.settings.max_rescue_passes; ++pass) {
    const Cx gamma = (pass == 0) ? cfg.gamma : rng.unit_complex();
    Homotopy H = make_straight_line(start_sys, target_sys, gamma, charts, hints);
    std::shared_ptr<EliminatedHomotopy> elim;
    if (cfg.eliminate_vars)
      elim = eliminate_cone_vars(H, cfg.elim_mode, cfg.elim_t_star);

    MultiStartDiagnostics sd;
    const auto raw = u_multiproj_start_points(outside, g0, cfg.epsilon, gamma,
                                              cone, d, &sd);
    std::vector<Eigen::VectorXcd> starts;
    int polish_failed = 0;
    for (const auto& p : raw) {
      Eigen::VectorXcd x = to_chart(p, charts, *ext);
      if (newton_polish(H, x, cfg.epsilon, cfg.settings.corrector_tol, 10)) {
        starts.push_back(std::move(x));
      } else {
        ++polish_failed;
      }
    }
    const auto results = track_batch_eliminated(H, elim, cfg.elim_t_star, starts,
                                                cfg.settings, cfg.epsilon,
                                                ext.get());
    ++passes;
    if (pass == 0) {
      local.start_count = sd.emitted;
      local.paths_tracked = sd.emitted;
      local.polish_failures = polish_failed;
      local.failures = polish_failed;
    }

    for (const auto& r : results) {
      const bool candidate = (r.status == PathStatus::Success ||
                              r.status == PathStatus::Singular) &&
                             r.endpoint.nfactors() > 0;
      if (!candidate) {
        if (pass == 0) ++local.failures;
        continue;
      }
      bool cone_ok = true;
      MultiProjPoint proj;
      proj.factors.resize(k);
      for (int g = 0; g < k; ++g) {
        const auto& gv = ext->group(g);
        Eigen::VectorXcd f(gv.size() - 1);
        int j = 0;
        for (size_t c = 0; c < gv.size(); ++c) {
          if (gv[c] == ext->cone_var(g)) {
            if (std::abs(r.endpoint.factors[g][c]) >=
                cfg.settings.infinity_threshold)
              cone_ok = false;
          } else {
            f[j++] = r.endpoint.factors[g][c];
          }
        }
        proj.factors[g] = std::move(f);
      }
      if (!cone_ok) {
        if (pass == 0) ++local.at_infinity;
        continue;
      }
      if (pass == 0) ++local.successes;
      projected.push_back(normalize(proj));
    }
    if (polish_failed == 0 &&
        !batch_anomalous(results, cfg.settings.dedup_tol,
                         /*ignore_late_failures=*/false))
      break;
    const size_t now = dedup_endpoints(projected, cfg.settings.dedup_tol).size();
    if (pass > 0 && now == union_size) break;  // pooled endpoints saturated
    union_size = now;
  }
  if (passes > 1)
    local.note = "multiprojective intersection used " + std::to_string(passes) +
                 " gamma passes";

  auto deduped =
      dedup_endpoints(projected, cfg.settings.dedup_tol, &local.cluster_sizes);

  std::vector<MPoly> Fnew = F.polys;
  Fnew.push_back(g1);
  PolySystem Fsys(ring, Fnew);
  std::vector<MultiProjPoint> kept;
  for (auto& p : deduped) {
    const Eigen::VectorXcd x = join_by_groups(p, *ring);
    bool ok = true;
    for (const auto& f : Fsys.polys) {
      const double s = std::max(1.0, f.coeff_scale());
      if (std::abs(f.evaluate(x)) > 1e-6 * s) ok = false;
    }
    if (ok && !is_isolated_regular(Fsys, x)) ok = false;
    if (ok) kept.push_back(std::move(p));
  }

  if (local.failures > 0 || local.polish_failures > 0) {
    local.warning = true;
    local.note = "multiprojective intersect: " + std::to_string(local.failures) +
                 " failed paths";
  }
  if (diag) *diag = local;

  WitnessSet out{std::move(Fsys), {}, std::move(kept)};
  out.validate(1e-6);
  return out;
}

WitnessCollection intersect_hypersurface_multi(
    const WitnessCollection& wc, const MPoly& g1, const MultiUGenConfig& cfg,
    std::vector<MultiIntersectDiagnostics>* diags) {
  const RingPtr& ring = wc.F.ring;
  const int k = ring->ngroups();
  const int m = wc.dim();
  if (m < 0) throw std::invalid_argument("intersect_multi: empty collection");

  WitnessCollection out;
  out.slice_families = wc.slice_families;
  {
    std::vector<MPoly> Fnew = wc.F.polys;
    Fnew.push_back(g1);
    out.F = PolySystem(ring, std::move(Fnew));
  }

  // Same-dimension components: witness points already on V(g1).
  const double scale = std::max(1.0, g1.coeff_scale());
  for (const auto& [type, w] : wc.sets) {
    std::vector<MultiProjPoint> inside;
    for (const auto& p : w.points) {
      const Eigen::VectorXcd x = join_by_groups(p, *ring);
      if (std::abs(g1.evaluate(x)) <= kContainTol * scale) inside.push_back(p);
    }
    if (!inside.empty())
      out.sets.emplace(type, WitnessSet{w.F, w.slice, std::move(inside)});
  }

  if (m == 0) return out;

  std::vector<int> caps(k);
  for (int g = 0; g < k; ++g) caps[g] = static_cast<int>(ring->group(g).size()) - 1;

  // Enumerate output types (sum = m - 1) and slice down to curves.
  std::vector<std::vector<int>> types;
  std::vector<int> cur(k, 0);
  const auto recurse = [&](auto&& self, int g, int left) -> void {
    if (g == k - 1) {
      if (left <= caps[g]) {
        cur[g] = left;
        types.push_back(cur);
      }
      return;
    }
    for (int a = 0; a <= std::min(left, caps[g]); ++a) {
      cur[g] = a;
      self(self, g + 1, left - a);
    }
  };
  recurse(recurse, 0, m - 1);

  Rng rng(cfg.settings.seed ^ 0x696d756cULL);
  for (const auto& type : types) {
    // The curve C = X cut by the prefix slices of this type.
    std::vector<MPoly> La;
    for (int g = 0; g < k; ++g)
      for (int j = 0; j < type[g]; ++j) La.push_back(wc.slice_families[g][j]);
    std::vector<MPoly> FC = wc.F.polys;
    for (const auto& l : La) FC.push_back(l);
    PolySystem FCsys(ring, FC);

    // Directional witness sets from the collection entries at type + e_g.
    std::vector<WitnessSet> directional;
    bool feasible = true;
    for (int g = 0; g < k; ++g) {
      std::vector<int> up = type;
      ++up[g];
      if (up[g] > caps[g]) {
        // Necessarily empty direction; keep the row's slice linear available.
        MPoly lin = (static_cast<int>(wc.slice_families[g].size()) > type[g])
                        ? wc.slice_families[g][type[g]]
                        : draw_group_linear(ring, g, rng);
        directional.push_back(WitnessSet{FCsys, {lin}, {}});
        continue;
      }
      const auto it = wc.sets.find(up);
      if (it == wc.sets.end()) {
        std::string name = "(";
        for (int i = 0; i < k; ++i)
          name += std::to_string(up[i]) + (i + 1 < k ? "," : ")");
        throw std::invalid_argument("intersect_multi: missing witness set " + name);
      }
      directional.push_back(
          WitnessSet{FCsys, {wc.slice_families[g][type[g]]}, it->second.points});
      (void)feasible;
    }

    MultiUGenConfig sub = cfg;
    sub.settings.seed = rng.child_seed(static_cast<std::uint64_t>(out.sets.size()) + 7);
    MultiIntersectDiagnostics d;
    WitnessSet zero = intersect_curve_multi(directional, g1, sub, &d);
    if (diags) diags->push_back(d);

    WitnessSet entry{out.F, La, std::move(zero.points)};
    entry.validate(1e-6);
    out.sets.emplace(type, std::move(entry));
  }
  return out;
}

}  // namespace ugen
