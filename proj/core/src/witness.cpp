#include "ugen/witness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ugen/univariate.hpp"

namespace ugen {
namespace {

constexpr double kWitnessResidualTol = 1e-8;

/// Dense coefficients of a degree-<=1 polynomial over the full ring.
void dense_linear(const MPoly& p, Eigen::VectorXcd& coeffs, Cx& c0) {
  coeffs = Eigen::VectorXcd::Zero(p.ring()->nvars());
  c0 = Cx(0.0);
  for (const auto& [e, c] : p.terms()) {
    int var = -1;
    for (int v = 0; v < static_cast<int>(e.size()); ++v) {
      if (e[v] == 0) continue;
      if (e[v] > 1 || var >= 0)
        throw std::invalid_argument("expected a linear polynomial");
      var = v;
    }
    if (var < 0)
      c0 += c;
    else
      coeffs[var] += c;
  }
}

/// True when p satisfies every polynomial of F to the residual tolerance at
/// unit scale.
bool satisfies(const PolySystem& F, const Eigen::VectorXcd& x, double tol) {
  for (const auto& f : F.polys) {
    const double scale = std::max(1.0, f.coeff_scale());
    if (std::abs(f.evaluate(x)) > tol * scale) return false;
  }
  return true;
}

}  // namespace

bool newton_contraction_probe(const PolySystem& target, const Eigen::VectorXcd& x,
                              double delta) {
  const int n = static_cast<int>(x.size());
  const int m = target.size();
  const int extra = n - m;  // chart rows completing the square system
  if (extra < 1) return true;

  Rng prng(0x70726f6265ULL);  // fixed probe data, same for every point
  Eigen::MatrixXcd chart(extra, n);
  Eigen::VectorXcd dir(n);
  for (int r = 0; r < extra; ++r)
    for (int i = 0; i < n; ++i) chart(r, i) = prng.gauss_complex();
  for (int i = 0; i < n; ++i) dir[i] = prng.gauss_complex();
  dir /= dir.norm();
  const Eigen::VectorXcd chart_rhs = chart * x;

  Eigen::VectorXcd y = x + delta * dir;
  double delta1 = 0.0;
  for (int step = 0; step < 2; ++step) {
    Eigen::VectorXcd Fv(n);
    Eigen::MatrixXcd J(n, n);
    Fv.head(m) = target.evaluate(y);
    J.topRows(m) = target.jacobian(y);
    Fv.tail(extra) = chart * y - chart_rhs;
    J.bottomRows(extra) = chart;
    const Eigen::VectorXcd dy = Eigen::PartialPivLU<Eigen::MatrixXcd>(J).solve(-Fv);
    const double norm = dy.norm();
    if (!std::isfinite(norm)) return false;
    if (step == 0) {
      delta1 = norm;
      y += dy;
    } else {
      return norm <= 0.25 * delta1 + 1e-14;
    }
  }
  return false;
}

bool is_isolated_regular(const PolySystem& target, const Eigen::VectorXcd& x) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(target.jacobian(x));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return false;
  const double rc = s[s.size() - 1] / s[0];
  if (rc >= 1e-6) return true;
  if (rc < 1e-10) return false;
  return newton_contraction_probe(target, x, 1e-7);
}

namespace {

/// Keeps Success endpoints that satisfy the target and are regular isolated
/// points of it; fills the outcome counters.
std::vector<MultiProjPoint> keep_endpoints(const std::vector<PathResult>& results,
                                           const PolySystem& target,
                                           const Ring& ring,
                                           SolveDiagnostics& local) {
  std::vector<MultiProjPoint> good;
  local.paths_tracked = static_cast<int>(results.size());
  for (const auto& r : results) {
    switch (r.status) {
      case PathStatus::Success: {
        if (r.endpoint.nfactors() == 0) {
          ++local.failures;
          break;
        }
        const Eigen::VectorXcd joined = join_by_groups(r.endpoint, ring);
        if (!satisfies(target, joined, kWitnessResidualTol) ||
            !is_isolated_regular(target, joined)) {
          ++local.filtered;
          break;
        }
        ++local.successes;
        good.push_back(r.endpoint);
        break;
      }
      case PathStatus::Singular:
        ++local.singular;
        break;
      default:
        ++local.failures;
        break;
    }
  }
  // A non-reduced point split by roundoff shows up as a close pair of
  // near-solutions, or as one survivor next to a Singular-labeled endpoint.
  // Probe such points from above the split scale, where a genuine double
  // point exposes its rate-1/2 contraction.
  if (!good.empty()) {
    std::vector<const MultiProjPoint*> singular_nearby;
    for (const auto& r : results)
      if (r.status == PathStatus::Singular && r.endpoint.nfactors() > 0)
        singular_nearby.push_back(&r.endpoint);
    std::vector<bool> suspect(good.size(), false);
    for (size_t i = 0; i < good.size(); ++i) {
      for (size_t j = i + 1; j < good.size(); ++j)
        if (point_distance(good[i], good[j]) < 1e-4) suspect[i] = suspect[j] = true;
      for (const auto* s : singular_nearby)
        if (s->nfactors() == good[i].nfactors() &&
            point_distance(good[i], *s) < 1e-4)
          suspect[i] = true;
    }
    std::vector<MultiProjPoint> vetted;
    for (size_t i = 0; i < good.size(); ++i) {
      if (suspect[i] &&
          !newton_contraction_probe(target, join_by_groups(good[i], ring), 1e-4)) {
        ++local.filtered;
        --local.successes;
        continue;
      }
      vetted.push_back(std::move(good[i]));
    }
    good = std::move(vetted);
  }

  if (local.failures > 0 || local.singular > 0) {
    local.warning = true;
    local.note = "path failures during solve";
  }
  return good;
}

/// Bezout-style solve driver: tracks the batch, and while the outcome looks
/// lossy (a path failed before the endgame or two paths merged) reruns the
/// whole batch under a fresh gamma, accumulating the union of the kept
/// endpoints. Start points of a straight-line family do not depend on gamma.
std::vector<MultiProjPoint> union_solve(const PolySystem& start_sys,
                                        const PolySystem& target_sys,
                                        const std::vector<MPoly>& charts,
                                        const std::vector<RowHint>& hints,
                                        const std::vector<Eigen::VectorXcd>& starts,
                                        const TrackerSettings& settings, Rng& rng,
                                        SolveDiagnostics* diag) {
  const RingPtr& ring = start_sys.ring;
  SolveDiagnostics first;
  std::vector<MultiProjPoint> kept;
  size_t union_size = 0;
  int passes = 0;
  for (int pass = 0; pass <= settings.max_rescue_passes; ++pass) {
    const Cx gamma = rng.unit_complex();
    Homotopy H = make_straight_line(start_sys, target_sys, gamma, charts, hints);
    const auto results = track_batch(H, starts, settings, 0.0, ring.get());
    SolveDiagnostics local;
    auto good = keep_endpoints(results, target_sys, *ring, local);
    if (pass == 0) first = local;
    kept.insert(kept.end(), good.begin(), good.end());
    ++passes;
    if (!batch_anomalous(results, settings.dedup_tol, /*ignore_late=*/true)) break;
    const size_t now = dedup_endpoints(kept, settings.dedup_tol).size();
    if (pass > 0 && now == union_size) break;  // the union has saturated
    union_size = now;
  }
  auto deduped = dedup_endpoints(kept, settings.dedup_tol, &first.cluster_sizes);
  if (passes > 1)
    first.note = "solve used " + std::to_string(passes) + " gamma passes";
  if (diag) diag->merge(first);
  return deduped;
}

void check_square_in_chart(const PolySystem& F, int n_slices) {
  const int k = F.ring->ngroups();
  if (F.size() + n_slices + k != F.ring->nvars())
    throw std::invalid_argument("solver: system is not square in its chart");
}

}  // namespace

void SolveDiagnostics::merge(const SolveDiagnostics& o) {
  paths_tracked += o.paths_tracked;
  successes += o.successes;
  at_infinity += o.at_infinity;
  failures += o.failures;
  singular += o.singular;
  filtered += o.filtered;
  cluster_sizes.insert(cluster_sizes.end(), o.cluster_sizes.begin(),
                       o.cluster_sizes.end());
  warning = warning || o.warning;
  if (note.empty()) note = o.note;
}

std::vector<int> WitnessSet::slice_type() const {
  std::vector<int> type(F.ring->ngroups(), 0);
  for (const auto& l : slice) {
    const auto deg = l.multidegree();
    int g = -1;
    for (int i = 0; i < static_cast<int>(deg.size()); ++i) {
      if (deg[i] == 0) continue;
      if (deg[i] != 1 || g >= 0)
        throw std::invalid_argument("witness: slice entry is not a group linear");
      g = i;
    }
    if (g < 0) throw std::invalid_argument("witness: constant slice entry");
    ++type[g];
  }
  return type;
}

void WitnessSet::validate(double tol) const {
  for (const auto& p : points) {
    const Eigen::VectorXcd x = join_by_groups(p, *F.ring);
    for (const auto& f : F.polys) {
      const double scale = std::max(1.0, f.coeff_scale());
      if (std::abs(f.evaluate(x)) > tol * scale)
        throw std::runtime_error("witness: point violates the defining equations");
    }
    for (const auto& l : slice) {
      const double scale = std::max(1.0, l.coeff_scale());
      if (std::abs(l.evaluate(x)) > tol * scale)
        throw std::runtime_error("witness: point violates its slice");
    }
  }
}

int WitnessCollection::dim() const {
  if (sets.empty()) return -1;
  int d = 0;
  for (int a : sets.begin()->first) d += a;
  return d;
}

std::vector<MPoly> draw_charts(const RingPtr& ring, Rng& rng) {
  std::vector<MPoly> charts;
  charts.reserve(ring->ngroups());
  for (int g = 0; g < ring->ngroups(); ++g) {
    const auto coeffs = rng.unit_sphere(static_cast<int>(ring->group(g).size()));
    charts.push_back(MPoly::group_linear(ring, g, coeffs, Cx(-1.0)));
  }
  return charts;
}

MPoly draw_group_linear(const RingPtr& ring, int group, Rng& rng) {
  const auto coeffs = rng.unit_sphere(static_cast<int>(ring->group(group).size()));
  return MPoly::group_linear(ring, group, coeffs, Cx(0.0));
}

std::vector<MPoly> draw_slice(const RingPtr& ring, const std::vector<int>& type,
                              Rng& rng) {
  std::vector<MPoly> slice;
  for (int g = 0; g < static_cast<int>(type.size()); ++g)
    for (int j = 0; j < type[g]; ++j) slice.push_back(draw_group_linear(ring, g, rng));
  return slice;
}

Eigen::VectorXcd to_chart(const MultiProjPoint& p,
                          const std::vector<MPoly>& charts, const Ring& ring) {
  if (p.nfactors() != ring.ngroups() ||
      charts.size() != static_cast<size_t>(ring.ngroups()))
    throw std::invalid_argument("to_chart: factor/chart count mismatch");
  Eigen::VectorXcd x(ring.nvars());
  for (int g = 0; g < ring.ngroups(); ++g) {
    Eigen::VectorXcd c;
    Cx c0;
    dense_linear(charts[g], c, c0);
    const auto& gv = ring.group(g);
    Cx dot(0.0);
    for (size_t i = 0; i < gv.size(); ++i) dot += c[gv[i]] * p.factors[g][i];
    if (dot == Cx(0.0))
      throw std::runtime_error("to_chart: point lies on the chart hyperplane");
    const Cx sigma = -c0 / dot;  // chart: c.x + c0 = 0 with c0 = -1
    for (size_t i = 0; i < gv.size(); ++i) x[gv[i]] = sigma * p.factors[g][i];
  }
  return x;
}

// ---------------------------------------------------------------------------

std::vector<MultiProjPoint> total_degree_solve(const PolySystem& F,
                                               const TrackerSettings& settings,
                                               SolveDiagnostics* diag) {
  const RingPtr& ring = F.ring;
  if (ring->ngroups() != 1)
    throw std::invalid_argument("total_degree_solve: single-group systems only");
  const int n = ring->nvars();
  if (F.size() == n) {
    // Square affine input: solve its projective closure; endpoints come back
    // over the homogenized ring.
    return total_degree_solve(homogenize_system(F), settings, diag);
  }
  check_square_in_chart(F, 0);

  Rng rng(settings.seed ^ 0x746f74616cULL);
  std::vector<MPoly> charts = draw_charts(ring, rng);

  // Start rows x_{v_i}^{d_i} - c_i x_base^{d_i}.
  const int base = ring->group(0)[0];
  std::vector<int> row_var(F.size());
  {
    int next = 0;
    for (int i = 0; i < F.size(); ++i) {
      if (next == base) ++next;
      row_var[i] = ring->group(0)[next++];
    }
  }
  std::vector<MPoly> start_rows;
  std::vector<int> degs(F.size());
  std::vector<Cx> cs(F.size());
  for (int i = 0; i < F.size(); ++i) {
    const int d = F.polys[i].total_degree();
    if (d < 1) throw std::invalid_argument("total_degree_solve: constant row");
    degs[i] = d;
    cs[i] = rng.unit_complex();
    MPoly row = MPoly::variable(ring, row_var[i], d);
    ExpVec e(n, 0);
    e[base] = static_cast<std::uint8_t>(d);
    row.add_term(e, -cs[i]);
    start_rows.push_back(std::move(row));
  }

  // Closed-form start points: the coordinate-wise roots.
  std::vector<std::vector<Cx>> roots(F.size());
  long total = 1;
  for (int i = 0; i < F.size(); ++i) {
    std::vector<Cx> binom(degs[i] + 1, Cx(0.0));
    binom[0] = -cs[i];
    binom[degs[i]] = Cx(1.0);
    roots[i] = univariate_roots(binom);
    total *= degs[i];
    if (total > 50'000'000)
      throw std::invalid_argument("total_degree_solve: start count too large");
  }

  std::vector<Eigen::VectorXcd> starts;
  starts.reserve(total);
  std::vector<int> odo(F.size(), 0);
  Eigen::VectorXcd chart_c;
  Cx chart_c0;
  dense_linear(charts[0], chart_c, chart_c0);
  for (long it = 0; it < total; ++it) {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
    x[base] = Cx(1.0);
    for (int i = 0; i < F.size(); ++i) x[row_var[i]] = roots[i][odo[i]];
    // Rescale onto the chart c.x = 1.
    Cx cx(0.0);
    for (int v = 0; v < n; ++v) cx += chart_c[v] * x[v];
    if (cx != Cx(0.0)) {
      x *= Cx(1.0) / cx;
      starts.push_back(std::move(x));
    }
    for (int i = F.size() - 1; i >= 0; --i) {
      if (++odo[i] < degs[i]) break;
      odo[i] = 0;
    }
  }

  const PolySystem start_sys(ring, std::move(start_rows));
  const PolySystem target_sys(ring, F.polys);
  return union_solve(start_sys, target_sys, charts, {}, starts, settings, rng,
                     diag);
}

// ---------------------------------------------------------------------------

namespace {

struct Assignment {
  // For each row, the group it is charged to and which linear factor vanishes.
  std::vector<std::pair<int, int>> choice;
};

void enumerate_assignments(
    const std::vector<std::vector<int>>& degs, int row,
    std::vector<int>& remaining, std::vector<std::pair<int, int>>& current,
    std::vector<Assignment>& out, long limit) {
  const int m = static_cast<int>(degs.size());
  if (row == m) {
    for (int r : remaining)
      if (r != 0) return;
    out.push_back({current});
    if (static_cast<long>(out.size()) > limit)
      throw std::runtime_error("mbezout_solve: start count exceeds the limit");
    return;
  }
  for (int g = 0; g < static_cast<int>(remaining.size()); ++g) {
    if (remaining[g] == 0 || degs[row][g] == 0) continue;
    --remaining[g];
    for (int j = 0; j < degs[row][g]; ++j) {
      current[row] = {g, j};
      enumerate_assignments(degs, row + 1, remaining, current, out, limit);
    }
    ++remaining[g];
  }
}

}  // namespace

std::vector<MultiProjPoint> mbezout_solve(const PolySystem& F,
                                          const TrackerSettings& settings,
                                          SolveDiagnostics* diag) {
  const RingPtr& ring = F.ring;
  const int k = ring->ngroups();
  const int n = ring->nvars();
  check_square_in_chart(F, 0);

  Rng rng(settings.seed ^ 0x6d62657aULL);
  const auto charts = draw_charts(ring, rng);

  const auto degs = F.multidegrees();

  // Linear factors per row and group, and the product start rows.
  std::vector<std::vector<std::vector<MPoly>>> factors(F.size());
  std::vector<MPoly> start_rows;
  std::vector<RowHint> hints;
  for (int i = 0; i < F.size(); ++i) {
    factors[i].resize(k);
    std::vector<MPoly> flat;
    for (int g = 0; g < k; ++g)
      for (int j = 0; j < degs[i][g]; ++j) {
        factors[i][g].push_back(draw_group_linear(ring, g, rng));
        flat.push_back(factors[i][g].back());
      }
    if (flat.empty())
      throw std::invalid_argument("mbezout_solve: degree-zero row");
    MPoly prod = flat[0];
    for (size_t j = 1; j < flat.size(); ++j) prod = prod * flat[j];
    start_rows.push_back(std::move(prod));
    hints.push_back(RowHint::product(std::move(flat)));
  }

  // Capacities: each group must absorb exactly dim(P^{n_g}) linear conditions.
  std::vector<int> capacity(k);
  for (int g = 0; g < k; ++g)
    capacity[g] = static_cast<int>(ring->group(g).size()) - 1;

  std::vector<Assignment> assignments;
  {
    std::vector<std::pair<int, int>> current(F.size());
    std::vector<int> remaining = capacity;
    enumerate_assignments(degs, 0, remaining, current, assignments, 5'000'000);
  }

  // One start point per assignment: per group, solve the stacked linear
  // system of chosen factors plus the chart.
  std::vector<Eigen::VectorXcd> starts;
  starts.reserve(assignments.size());
  for (const auto& asg : assignments) {
    Eigen::VectorXcd x(n);
    bool ok = true;
    for (int g = 0; g < k && ok; ++g) {
      const auto& gv = ring->group(g);
      const int m = static_cast<int>(gv.size());
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
      int r = 0;
      for (int i = 0; i < F.size(); ++i) {
        if (asg.choice[i].first != g) continue;
        Eigen::VectorXcd c;
        Cx c0;
        dense_linear(factors[i][g][asg.choice[i].second], c, c0);
        for (int v = 0; v < m; ++v) A(r, v) = c[gv[v]];
        rhs[r] = -c0;
        ++r;
      }
      Eigen::VectorXcd c;
      Cx c0;
      dense_linear(charts[g], c, c0);
      for (int v = 0; v < m; ++v) A(r, v) = c[gv[v]];
      rhs[r] = -c0;
      ++r;
      if (r != m) {
        ok = false;
        break;
      }
      Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
      const Eigen::VectorXcd y = lu.solve(rhs);
      for (int v = 0; v < m; ++v) {
        x[gv[v]] = y[v];
        if (!is_finite(y[v])) ok = false;
      }
    }
    if (ok) starts.push_back(std::move(x));
  }

  const PolySystem start_sys(ring, std::move(start_rows));
  const PolySystem target_sys(ring, F.polys);
  return union_solve(start_sys, target_sys, charts, hints, starts, settings, rng,
                     diag);
}

// ---------------------------------------------------------------------------

WitnessSet witness_curve(const PolySystem& F, const TrackerSettings& settings,
                         SolveDiagnostics* diag) {
  const RingPtr& ring = F.ring;
  if (ring->ngroups() != 1)
    throw std::invalid_argument("witness_curve: single-group systems only; use witness_collection");
  const int needed = ring->nvars() - 1 - F.size();
  if (needed != 1)
    throw std::invalid_argument("witness_curve: system does not cut out a curve");

  Rng rng(settings.seed ^ 0x776974ULL);
  std::vector<MPoly> slice = {draw_group_linear(ring, 0, rng)};

  SolveDiagnostics first;
  std::vector<MPoly> squared = F.polys;
  squared.push_back(slice[0]);
  auto points =
      total_degree_solve(PolySystem(ring, squared), settings, &first);

  WitnessSet w{F, slice, std::move(points)};

  // On lossy solves, repeat from independent slices and pool what moves back.
  // Every moved point lies on X intersect V(slice), so the union can only
  // fill in missed witness points, never overshoot.
  if (first.warning) {
    for (int round = 1; round <= settings.max_rescue_passes; ++round) {
      TrackerSettings rs = settings;
      rs.seed = rng.child_seed(round);
      MPoly fresh = draw_group_linear(ring, 0, rng);
      std::vector<MPoly> squared2 = F.polys;
      squared2.push_back(fresh);
      SolveDiagnostics extra;
      auto pts2 = total_degree_solve(PolySystem(ring, squared2), rs, &extra);
      if (pts2.empty()) continue;
      WitnessSet w2{F, {fresh}, std::move(pts2)};
      const WitnessSet moved = move_slice(w2, slice, rs, &extra);
      const size_t before = w.points.size();
      auto merged = w.points;
      merged.insert(merged.end(), moved.points.begin(), moved.points.end());
      w.points = dedup_endpoints(merged, settings.dedup_tol);
      if (w.points.size() == before) break;  // saturated
    }
    first.note = "witness assembled from repeated slices";
  }
  if (diag) diag->merge(first);

  if (w.points.empty())
    throw std::runtime_error(
        "witness_curve: no witness points survived; the input may not be a curve");
  w.validate();
  return w;
}

WitnessSet move_slice(const WitnessSet& w, std::vector<MPoly> L_new,
                      const TrackerSettings& settings, SolveDiagnostics* diag) {
  if (L_new.size() != w.slice.size())
    throw std::invalid_argument("move_slice: slice size mismatch");
  const RingPtr& ring = w.F.ring;

  WitnessSet probe{w.F, L_new, {}};
  if (probe.slice_type() != w.slice_type())
    throw std::invalid_argument("move_slice: slice group pattern mismatch");

  Rng rng(settings.seed ^ 0x6d6f7665ULL);
  const auto charts = draw_charts(ring, rng);

  std::vector<MPoly> start_rows = w.F.polys;
  std::vector<MPoly> target_rows = w.F.polys;
  for (const auto& l : w.slice) start_rows.push_back(l);
  for (const auto& l : L_new) target_rows.push_back(l);
  const PolySystem start_sys(ring, std::move(start_rows));
  const PolySystem target_sys(ring, std::move(target_rows));

  std::vector<Eigen::VectorXcd> starts;
  starts.reserve(w.points.size());
  for (const auto& p : w.points) starts.push_back(to_chart(p, charts, *ring));

  // Moved points always lie on X intersect V(L_new), so pooling passes under
  // fresh gammas can only recover dropped points.
  SolveDiagnostics local;
  WitnessSet out{w.F, std::move(L_new), {}};
  std::vector<MultiProjPoint> pool;
  for (int pass = 0; pass <= settings.max_rescue_passes; ++pass) {
    const Cx gamma = rng.unit_complex();
    Homotopy H = make_straight_line(start_sys, target_sys, gamma, charts);
    const auto results = track_batch(H, starts, settings, 0.0, ring.get());
    bool failed = false;
    for (const auto& r : results) {
      if (r.status == PathStatus::Success && r.endpoint.nfactors() > 0) {
        if (pass == 0) ++local.successes;
        pool.push_back(r.endpoint);
      } else {
        failed = true;
        if (pass == 0) {
          if (r.status == PathStatus::Singular)
            ++local.singular;
          else
            ++local.failures;
        }
      }
    }
    if (pass == 0) local.paths_tracked = static_cast<int>(results.size());
    out.points = dedup_endpoints(pool, settings.dedup_tol);
    if (!failed || out.points.size() >= w.points.size()) break;
  }
  if (out.points.size() != w.points.size()) {
    local.warning = true;
    local.note = "move_slice: path failures reduced the witness cardinality";
  }
  if (diag) diag->merge(local);
  out.validate();
  return out;
}

bool membership(const WitnessSet& w, const MultiProjPoint& p,
                const TrackerSettings& settings) {
  const RingPtr& ring = w.F.ring;
  const MultiProjPoint pn = normalize(p);
  const Eigen::VectorXcd px = join_by_groups(pn, *ring);

  Rng rng(settings.seed ^ 0x6d656d62ULL);
  // Random slice of the same group pattern, corrected to pass through p.
  std::vector<MPoly> through;
  const auto type = w.slice_type();
  std::vector<MPoly> pivot(ring->ngroups());
  std::vector<Cx> pivot_val(ring->ngroups());
  for (int g = 0; g < ring->ngroups(); ++g) {
    if (type[g] == 0) continue;
    for (int tries = 0;; ++tries) {
      pivot[g] = draw_group_linear(ring, g, rng);
      pivot_val[g] = pivot[g].evaluate(px);
      if (std::abs(pivot_val[g]) > 1e-8) break;
      if (tries > 32)
        throw std::runtime_error("membership: cannot find a pivot linear");
    }
  }
  for (int g = 0; g < ring->ngroups(); ++g) {
    for (int j = 0; j < type[g]; ++j) {
      MPoly mu = draw_group_linear(ring, g, rng);
      const Cx val = mu.evaluate(px);
      through.push_back(mu - pivot[g].scaled(val / pivot_val[g]));
    }
  }

  TrackerSettings s = settings;
  s.seed = rng.child_seed(0x6d76ULL);
  SolveDiagnostics diag;
  try {
    const WitnessSet moved = move_slice(w, through, s, &diag);
    for (const auto& q : moved.points)
      if (point_distance(q, pn) <= settings.dedup_tol) return true;
  } catch (const std::exception&) {
    return false;
  }
  return false;
}

WitnessCollection witness_collection(const PolySystem& F, int dim,
                                     const TrackerSettings& settings,
                                     SolveDiagnostics* diag) {
  const RingPtr& ring = F.ring;
  const int k = ring->ngroups();

  std::vector<int> caps(k);
  for (int g = 0; g < k; ++g) caps[g] = static_cast<int>(ring->group(g).size()) - 1;

  // All valid slice types (a_1..a_k), sum = dim, a_g <= ambient factor dim.
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
  recurse(recurse, 0, dim);

  WitnessCollection out;
  out.F = F;
  Rng rng(settings.seed ^ 0x636f6cULL);
  // Nested slices: every type takes prefixes of one family per group.
  out.slice_families.resize(k);
  for (int g = 0; g < k; ++g)
    for (int j = 0; j < caps[g]; ++j)
      out.slice_families[g].push_back(draw_group_linear(ring, g, rng));

  for (const auto& type : types) {
    std::vector<MPoly> slice;
    for (int g = 0; g < k; ++g)
      for (int j = 0; j < type[g]; ++j) slice.push_back(out.slice_families[g][j]);
    std::vector<MPoly> squared = F.polys;
    for (const auto& l : slice) squared.push_back(l);
    TrackerSettings s = settings;
    s.seed = rng.child_seed(static_cast<std::uint64_t>(out.sets.size()) + 1);
    PolySystem sys(ring, std::move(squared));
    auto points = (k == 1) ? total_degree_solve(sys, s, diag)
                           : mbezout_solve(sys, s, diag);
    WitnessSet w{F, std::move(slice), std::move(points)};
    w.validate();
    out.sets.emplace(type, std::move(w));
  }
  return out;
}

}  // namespace ugen
