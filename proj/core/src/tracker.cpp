#include "ugen/tracker.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ugen {
namespace {

bool all_finite(const Eigen::VectorXcd& v) {
  for (int i = 0; i < v.size(); ++i)
    if (!is_finite(v[i])) return false;
  return true;
}

double scaled_residual(const Eigen::VectorXcd& H, const Eigen::VectorXcd& x) {
  const double hx = H.lpNorm<Eigen::Infinity>();
  const double xx = x.lpNorm<Eigen::Infinity>();
  return hx / std::max(1.0, xx);
}

/// One Davidenko slope: solves J dx/dt = -dH/dt at (x, t).
bool slope(const HomotopyBase& H, const Eigen::VectorXcd& x, double t,
           Eigen::VectorXcd& out) {
  Eigen::MatrixXcd J;
  Eigen::VectorXcd dt;
  H.eval_all(x, t, nullptr, &J, &dt);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
  out = lu.solve(-dt);
  return all_finite(out);
}

/// Newton correction at fixed t; succeeds when the scaled residual or the
/// last Newton update drops below tol within max_iters updates. The update
/// criterion keeps ill-conditioned but convergent passages alive where the
/// residual alone would stall.
bool correct(const HomotopyBase& H, Eigen::VectorXcd& x, double t, double tol,
             int max_iters) {
  Eigen::VectorXcd Hv;
  Eigen::MatrixXcd Jv;
  H.eval_all(x, t, &Hv, &Jv, nullptr);
  if (scaled_residual(Hv, x) <= tol) return true;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Jv);
    const Eigen::VectorXcd dx = lu.solve(-Hv);
    if (!all_finite(dx)) return false;
    x += dx;
    const bool step_small =
        dx.lpNorm<Eigen::Infinity>() <= tol * std::max(1.0, x.lpNorm<Eigen::Infinity>());
    H.eval_all(x, t, &Hv, it + 1 < max_iters ? &Jv : nullptr, nullptr);
    if (step_small || scaled_residual(Hv, x) <= tol) return true;
  }
  return false;
}

double rcond_estimate(const Eigen::MatrixXcd& J) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0) return 0.0;
  return s[s.size() - 1] / s[0];
}

}  // namespace

void TrackerSettings::validate() const {
  if (!(min_step > 0.0) || !(min_step <= initial_step) || !(initial_step < 1.0))
    throw std::invalid_argument("tracker: need 0 < min_step <= initial_step < 1");
  if (max_corrector_iters < 1)
    throw std::invalid_argument("tracker: max_corrector_iters >= 1");
  if (!(corrector_tol > 0.0) || !(endpoint_refine_tol > 0.0) ||
      !(infinity_threshold > 0.0) || !(dedup_tol > 0.0))
    throw std::invalid_argument("tracker: tolerances must be positive");
  if (max_steps < 1) throw std::invalid_argument("tracker: max_steps >= 1");
}

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success: return "Success";
    case PathStatus::AtInfinity: return "AtInfinity";
    case PathStatus::MinStepFailure: return "MinStepFailure";
    case PathStatus::MaxStepsExceeded: return "MaxStepsExceeded";
    case PathStatus::Singular: return "Singular";
  }
  return "?";
}

bool newton_polish(const HomotopyBase& H, Eigen::VectorXcd& x, double t,
                   double tol, int max_iters) {
  return correct(H, x, t, tol, max_iters);
}

double residual_norm(const HomotopyBase& H, const Eigen::VectorXcd& x,
                     double t) {
  Eigen::VectorXcd Hv;
  H.eval(x, t, Hv);
  return Hv.lpNorm<Eigen::Infinity>();
}

double condition_estimate(const HomotopyBase& H, const Eigen::VectorXcd& x,
                          double t) {
  Eigen::MatrixXcd J;
  H.eval_jacobian(x, t, J);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] <= 0.0)
    return std::numeric_limits<double>::infinity();
  return s[0] / s[s.size() - 1];
}

PathResult track_path(const HomotopyBase& H, const Eigen::VectorXcd& x0,
                      const TrackerSettings& settings, double t_start,
                      const Ring* factor_layout, double t_end) {
  settings.validate();
  if (H.dim() != H.nvars())
    throw std::invalid_argument("track_path: system is not square");
  if (x0.size() != H.nvars())
    throw std::invalid_argument("track_path: start dimension mismatch");
  if (!(t_start >= 0.0) || t_start >= 1.0)
    throw std::invalid_argument("track_path: t_start must lie in [0, 1)");
  if (!(t_end > t_start) || t_end > 1.0)
    throw std::invalid_argument("track_path: t_end must lie in (t_start, 1]");

  PathResult res;
  res.x = x0;
  res.t_reached = t_start;

  auto finish = [&](PathStatus status, double t) {
    res.status = status;
    res.t_reached = t;
    res.final_residual = residual_norm(H, res.x, t);
    if (factor_layout && all_finite(res.x)) {
      try {
        res.endpoint = normalize(split_by_groups(res.x, *factor_layout));
      } catch (const std::exception&) {
        res.endpoint = MultiProjPoint{};
      }
    }
    return res;
  };

  // Initial polish; the start must already satisfy the homotopy closely.
  if (!correct(H, res.x, t_start, settings.corrector_tol, 10) ||
      !all_finite(res.x))
    return finish(PathStatus::MinStepFailure, t_start);

  double t = t_start;
  double step = std::min(settings.initial_step, settings.max_step);
  int accepted = 0;
  int streak = 0;

  Eigen::VectorXcd k1, k2, k3, k4, xp;
  for (int attempts = 0; t < t_end - 1e-14; ++attempts) {
    if (attempts >= settings.max_steps) {
      res.steps_taken = accepted;
      return finish(PathStatus::MaxStepsExceeded, t);
    }
    const double h = std::min(step, t_end - t);

    bool ok = slope(H, res.x, t, k1);
    if (ok) ok = slope(H, res.x + (h / 2) * k1, t + h / 2, k2);
    if (ok) ok = slope(H, res.x + (h / 2) * k2, t + h / 2, k3);
    if (ok) ok = slope(H, res.x + h * k3, t + h, k4);
    Eigen::VectorXcd pred;
    if (ok) {
      pred = res.x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      xp = pred;
      ok = all_finite(xp) &&
           correct(H, xp, t + h, settings.corrector_tol,
                   settings.max_corrector_iters) &&
           all_finite(xp);
    }
    if (ok) {
      // A correction comparable to the predictor displacement signals the
      // corrector crossing over to a neighboring path; back off instead.
      const double pred_move = (pred - res.x).norm();
      const double corr_move = (xp - pred).norm();
      if (corr_move > settings.jump_guard_ratio * pred_move + 1e-10 * (1.0 + res.x.norm())) ok = false;
    }

    if (ok) {
      res.x = xp;
      t += h;
      ++accepted;
      if (++streak >= 4) {
        step = std::min(step * 2.0, settings.max_step);
        streak = 0;
      }
    } else {
      streak = 0;
      step /= 2.0;
      if (step < settings.min_step) {
        res.steps_taken = accepted;
        return finish(PathStatus::MinStepFailure, t);
      }
    }
  }
  res.steps_taken = accepted;

  if (t_end < 1.0) return finish(PathStatus::Success, t_end);

  // Arrived at t = 1: rank check, then Newton refinement against the target.
  Eigen::MatrixXcd J;
  H.eval_jacobian(res.x, 1.0, J);
  const double rc = rcond_estimate(J);
  res.final_condition_estimate = (rc > 0.0) ? 1.0 / rc : std::numeric_limits<double>::infinity();
  if (rc < settings.singular_rcond) {
    return finish(PathStatus::Singular, 1.0);  // endpoint reported, unrefined
  }

  Eigen::VectorXcd refined = res.x;
  if (correct(H, refined, 1.0, settings.endpoint_refine_tol, 30) &&
      all_finite(refined)) {
    // Two more Newton updates push the coordinate error to the quadratic
    // convergence floor.
    for (int extra = 0; extra < 2; ++extra) {
      Eigen::VectorXcd Hv;
      Eigen::MatrixXcd Jv;
      H.eval_all(refined, 1.0, &Hv, &Jv, nullptr);
      const Eigen::VectorXcd dx = Eigen::PartialPivLU<Eigen::MatrixXcd>(Jv).solve(-Hv);
      if (!all_finite(dx)) break;
      refined += dx;
    }
    if (all_finite(refined)) res.x = refined;
  }
  auto out = finish(PathStatus::Success, 1.0);
  const double xx = std::max(1.0, out.x.lpNorm<Eigen::Infinity>());
  if (out.final_residual > settings.corrector_tol * xx)
    out.status = PathStatus::Singular;
  return out;
}

namespace {

bool step_failed(PathStatus s) {
  return s == PathStatus::MinStepFailure || s == PathStatus::MaxStepsExceeded;
}

std::vector<PathResult> track_batch_once(
    const HomotopyBase& H, const std::vector<Eigen::VectorXcd>& starts,
    const TrackerSettings& settings, double t_start, const Ring* factor_layout,
    double t_end) {
  std::vector<PathResult> results(starts.size());
  if (starts.empty()) return results;

  int nthreads = settings.threads > 0
                     ? settings.threads
                     : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(starts.size())));

  if (nthreads == 1) {
    for (size_t i = 0; i < starts.size(); ++i)
      results[i] =
          track_path(H, starts[i], settings, t_start, factor_layout, t_end);
    return results;
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= starts.size()) break;
      results[i] =
          track_path(H, starts[i], settings, t_start, factor_layout, t_end);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace

std::vector<PathResult> track_batch(const HomotopyBase& H,
                                    const std::vector<Eigen::VectorXcd>& starts,
                                    const TrackerSettings& settings,
                                    double t_start, const Ring* factor_layout,
                                    double t_end) {
  auto results =
      track_batch_once(H, starts, settings, t_start, factor_layout, t_end);
  if (!settings.retry_failed) return results;

  std::vector<size_t> failed;
  for (size_t i = 0; i < results.size(); ++i)
    if (step_failed(results[i].status)) failed.push_back(i);
  if (failed.empty()) return results;

  TrackerSettings careful = settings;
  careful.initial_step = std::max(settings.initial_step / 5.0, settings.min_step);
  careful.max_step = std::max(settings.max_step / 5.0, settings.min_step);
  careful.min_step = std::min(settings.min_step, 1e-12);
  careful.max_steps = settings.max_steps * 2;
  careful.retry_failed = false;

  std::vector<Eigen::VectorXcd> retry_starts;
  retry_starts.reserve(failed.size());
  for (size_t i : failed) retry_starts.push_back(starts[i]);
  const auto retried = track_batch_once(H, retry_starts, careful, t_start,
                                        factor_layout, t_end);
  for (size_t j = 0; j < failed.size(); ++j) results[failed[j]] = retried[j];
  return results;
}

bool batch_anomalous(const std::vector<PathResult>& results, double dedup_tol,
                     bool ignore_late_failures) {
  std::vector<MultiProjPoint> good;
  for (const auto& r : results) {
    if (r.status != PathStatus::Success) {
      if (!ignore_late_failures || r.t_reached < 0.9) return true;
      continue;
    }
    if (r.endpoint.nfactors() > 0) good.push_back(r.endpoint);
  }
  std::vector<int> sizes;
  dedup_endpoints(good, dedup_tol, &sizes);
  for (int s : sizes)
    if (s > 1) return true;  // two paths collapsed onto one endpoint
  return false;
}

std::vector<PathResult> track_batch_eliminated(
    const Homotopy& full, const std::shared_ptr<EliminatedHomotopy>& elim,
    double switch_t, const std::vector<Eigen::VectorXcd>& starts,
    const TrackerSettings& settings, double t_start, const Ring* factor_layout) {
  if (!elim)
    return track_batch(full, starts, settings, t_start, factor_layout);
  if (!(switch_t > t_start) || switch_t >= 1.0)
    throw std::invalid_argument("track_batch_eliminated: switch_t in (t_start, 1)");

  // Phase A: full system up to the activation threshold.
  auto phase_a =
      track_batch(full, starts, settings, t_start, factor_layout, switch_t);

  std::vector<Eigen::VectorXcd> reduced;
  std::vector<size_t> alive;
  for (size_t i = 0; i < phase_a.size(); ++i) {
    if (phase_a[i].status == PathStatus::Success) {
      reduced.push_back(elim->reduce_point(phase_a[i].x));
      alive.push_back(i);
    }
  }

  // Phase B: reduced system to t = 1.
  auto phase_b = track_batch(*elim, reduced, settings, switch_t, nullptr);

  for (size_t j = 0; j < alive.size(); ++j) {
    PathResult& out = phase_a[alive[j]];
    const PathResult& b = phase_b[j];
    out.status = b.status;
    out.t_reached = b.t_reached;
    out.steps_taken += b.steps_taken;
    out.final_residual = b.final_residual;
    out.final_condition_estimate = b.final_condition_estimate;
    out.x = elim->lift_point(b.x, b.t_reached);
    out.endpoint = MultiProjPoint{};
    if (factor_layout) {
      try {
        out.endpoint = normalize(split_by_groups(out.x, *factor_layout));
      } catch (const std::exception&) {
      }
    }
  }
  return phase_a;
}

}  // namespace ugen
