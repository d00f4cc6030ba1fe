#include "ugen/homotopy.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ugen {
namespace {

// ---------------------------------------------------------------------------
// Compiled evaluation. Every polynomial is flattened once into coefficient +
// packed (variable, exponent) arrays; per-point evaluation fills a shared
// power table and walks the flat terms, producing values and gradient rows in
// one pass via prefix/suffix products.

struct Workspace {
  std::vector<Cx> pw;
  int stride = 0;

  void fill(const Eigen::VectorXcd& x, int nvars, int max_exp) {
    stride = max_exp + 1;
    pw.resize(static_cast<size_t>(nvars) * stride);
    for (int v = 0; v < nvars; ++v) {
      Cx* row = pw.data() + static_cast<size_t>(v) * stride;
      row[0] = Cx(1.0);
      for (int e = 1; e <= max_exp; ++e) row[e] = row[e - 1] * x[v];
    }
  }
  Cx p(int v, int e) const { return pw[static_cast<size_t>(v) * stride + e]; }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

struct CompiledPoly {
  struct Term {
    Cx c;
    std::uint32_t begin = 0, end = 0;
  };
  std::vector<Term> terms;
  std::vector<std::pair<std::uint16_t, std::uint8_t>> ve;
  int max_exp = 0;

  static CompiledPoly compile(const MPoly& p) {
    CompiledPoly out;
    for (const auto& [e, c] : p.terms()) {
      Term t;
      t.c = c;
      t.begin = static_cast<std::uint32_t>(out.ve.size());
      for (int v = 0; v < static_cast<int>(e.size()); ++v) {
        if (e[v] == 0) continue;
        out.ve.emplace_back(static_cast<std::uint16_t>(v), e[v]);
        out.max_exp = std::max(out.max_exp, int(e[v]));
      }
      t.end = static_cast<std::uint32_t>(out.ve.size());
      out.terms.push_back(t);
    }
    return out;
  }

  /// Adds scale * value to *val; adds scale * gradient into J row r if J.
  Cx value_grad(const Workspace& ws, Cx scale, Eigen::MatrixXcd* J, int r) const {
    Cx acc(0.0);
    Cx f[24], pref[25];
    for (const auto& t : terms) {
      const int k = static_cast<int>(t.end - t.begin);
      pref[0] = Cx(1.0);
      for (int j = 0; j < k; ++j) {
        const auto [v, e] = ve[t.begin + j];
        f[j] = ws.p(v, e);
        pref[j + 1] = pref[j] * f[j];
      }
      acc += t.c * pref[k];
      if (J) {
        Cx suf(1.0);
        for (int j = k - 1; j >= 0; --j) {
          const auto [v, e] = ve[t.begin + j];
          (*J)(r, v) += scale * t.c * double(e) * ws.p(v, e - 1) * pref[j] * suf;
          suf *= f[j];
        }
      }
    }
    return acc;
  }
};

struct SparseLinear {
  std::vector<std::pair<int, Cx>> coeffs;
  Cx c0{0.0};

  static SparseLinear from(const MPoly& p) {
    SparseLinear out;
    for (const auto& [e, c] : p.terms()) {
      int var = -1;
      for (int v = 0; v < static_cast<int>(e.size()); ++v) {
        if (e[v] == 0) continue;
        if (e[v] > 1 || var >= 0)
          throw std::invalid_argument("homotopy hint: factor is not linear");
        var = v;
      }
      if (var < 0)
        out.c0 += c;
      else
        out.coeffs.emplace_back(var, c);
    }
    return out;
  }

  Cx value(const Eigen::VectorXcd& x) const {
    Cx v = c0;
    for (const auto& [var, c] : coeffs) v += c * x[var];
    return v;
  }
};

struct CompiledProduct {
  std::vector<SparseLinear> factors;

  Cx value_grad(const Eigen::VectorXcd& x, Cx scale, Eigen::MatrixXcd* J,
                int r) const {
    const int k = static_cast<int>(factors.size());
    Cx vals[16], pref[17];
    pref[0] = Cx(1.0);
    for (int j = 0; j < k; ++j) {
      vals[j] = factors[j].value(x);
      pref[j + 1] = pref[j] * vals[j];
    }
    if (J) {
      Cx suf(1.0);
      for (int j = k - 1; j >= 0; --j) {
        const Cx rest = scale * pref[j] * suf;
        for (const auto& [var, c] : factors[j].coeffs) (*J)(r, var) += rest * c;
        suf *= vals[j];
      }
    }
    return pref[k];
  }
};

struct CompiledBinCone {
  Cx scale{1.0};
  struct Factor {
    int uvar = -1;
    int deg = 1;
    SparseLinear lin;
  };
  std::vector<Factor> factors;

  Cx value_grad(const Eigen::VectorXcd& x, Cx outer_scale, Eigen::MatrixXcd* J,
                int r) const {
    const int k = static_cast<int>(factors.size());
    Cx vals[8], pref[9], upow[8], lpow[8];
    pref[0] = Cx(1.0);
    for (int j = 0; j < k; ++j) {
      const auto& fac = factors[j];
      const Cx u = x[fac.uvar];
      const Cx l = fac.lin.value(x);
      Cx ud(1.0), ld(1.0);
      for (int e = 1; e < fac.deg; ++e) {
        ud *= u;
        ld *= l;
      }
      upow[j] = ud;  // u^{d-1}
      lpow[j] = ld;  // l^{d-1}
      vals[j] = ud * u - ld * l;
      pref[j + 1] = pref[j] * vals[j];
    }
    const Cx s = outer_scale * scale;
    if (J) {
      Cx suf(1.0);
      for (int j = k - 1; j >= 0; --j) {
        const auto& fac = factors[j];
        const Cx rest = s * pref[j] * suf;
        (*J)(r, fac.uvar) += rest * double(fac.deg) * upow[j];
        const Cx lg = rest * double(-fac.deg) * lpow[j];
        for (const auto& [var, c] : fac.lin.coeffs) (*J)(r, var) += lg * c;
        suf *= vals[j];
      }
    }
    return scale * pref[k];
  }
};

}  // namespace

RowHint RowHint::product(std::vector<MPoly> factors) {
  RowHint h;
  h.kind = Kind::LinearProduct;
  h.linear_factors = std::move(factors);
  return h;
}

RowHint RowHint::binomial_cone(Cx scale, std::vector<BinFactor> factors) {
  RowHint h;
  h.kind = Kind::BinomialCone;
  h.scale = scale;
  h.bin_factors = std::move(factors);
  return h;
}

// ---------------------------------------------------------------------------

struct Homotopy::Impl {
  enum class Kind { Moving, FixedScaled, Chart };
  struct Row {
    Kind kind = Kind::Moving;
    int start_poly = -1;  // index into pool (or prods/cones when hinted)
    int start_prod = -1;
    int start_cone = -1;
    int target_poly = -1;  // pool index; FixedScaled/Chart single poly
  };

  int nvars = 0;
  int max_exp = 0;
  std::vector<CompiledPoly> pool;
  std::vector<CompiledProduct> prods;
  std::vector<CompiledBinCone> cones;
  std::vector<Row> rows;

  int add_poly(const MPoly& p) {
    pool.push_back(CompiledPoly::compile(p));
    max_exp = std::max(max_exp, pool.back().max_exp);
    return static_cast<int>(pool.size()) - 1;
  }
};

Homotopy::Homotopy(PolySystem start, PolySystem target, Cx gamma,
                   std::vector<MPoly> charts, std::vector<RowHint> start_hints)
    : start_(std::move(start)),
      target_(std::move(target)),
      gamma_(gamma),
      charts_(std::move(charts)) {
  auto impl = std::make_shared<Impl>();
  impl->nvars = start_.ring->nvars();
  const int m = start_.size();
  for (int i = 0; i < m; ++i) {
    Impl::Row row;
    if (start_.polys[i] == target_.polys[i]) {
      row.kind = Impl::Kind::FixedScaled;
      row.target_poly = impl->add_poly(target_.polys[i]);
    } else {
      row.kind = Impl::Kind::Moving;
      row.target_poly = impl->add_poly(target_.polys[i]);
      const RowHint* hint =
          (i < static_cast<int>(start_hints.size())) ? &start_hints[i] : nullptr;
      if (hint && hint->kind == RowHint::Kind::LinearProduct) {
        CompiledProduct cp;
        for (const auto& f : hint->linear_factors)
          cp.factors.push_back(SparseLinear::from(f));
        impl->prods.push_back(std::move(cp));
        row.start_prod = static_cast<int>(impl->prods.size()) - 1;
      } else if (hint && hint->kind == RowHint::Kind::BinomialCone) {
        CompiledBinCone cc;
        cc.scale = hint->scale;
        for (const auto& f : hint->bin_factors) {
          CompiledBinCone::Factor cf;
          cf.uvar = f.var;
          cf.deg = f.deg;
          cf.lin = SparseLinear::from(f.linear);
          impl->max_exp = std::max(impl->max_exp, 1);
          cc.factors.push_back(std::move(cf));
        }
        impl->cones.push_back(std::move(cc));
        row.start_cone = static_cast<int>(impl->cones.size()) - 1;
      } else {
        row.start_poly = impl->add_poly(start_.polys[i]);
      }
    }
    impl->rows.push_back(row);
  }
  for (const auto& c : charts_) {
    Impl::Row row;
    row.kind = Impl::Kind::Chart;
    row.target_poly = impl->add_poly(c);
    impl->rows.push_back(row);
  }
  impl_ = std::move(impl);
}

int Homotopy::dim() const { return static_cast<int>(impl_->rows.size()); }

void Homotopy::eval_all(const Eigen::VectorXcd& x, double t,
                        Eigen::VectorXcd* H, Eigen::MatrixXcd* J,
                        Eigen::VectorXcd* dHdt) const {
  const auto& im = *impl_;
  const int nrows = static_cast<int>(im.rows.size());
  if (x.size() != im.nvars)
    throw std::invalid_argument("homotopy: point dimension mismatch");
  if (H) H->resize(nrows);
  if (dHdt) dHdt->resize(nrows);
  if (J) {
    J->resize(nrows, im.nvars);
    J->setZero();
  }

  auto& ws = workspace();
  ws.fill(x, im.nvars, im.max_exp);

  const Cx a = (1.0 - t) * gamma_;
  const Cx b(t, 0.0);

  for (int r = 0; r < nrows; ++r) {
    const auto& row = im.rows[r];
    switch (row.kind) {
      case Impl::Kind::Moving: {
        Cx sval;
        if (row.start_prod >= 0)
          sval = im.prods[row.start_prod].value_grad(x, a, J, r);
        else if (row.start_cone >= 0)
          sval = im.cones[row.start_cone].value_grad(x, a, J, r);
        else
          sval = im.pool[row.start_poly].value_grad(ws, a, J, r);
        const Cx tval = im.pool[row.target_poly].value_grad(ws, b, J, r);
        if (H) (*H)[r] = a * sval + b * tval;
        if (dHdt) (*dHdt)[r] = tval - gamma_ * sval;
        break;
      }
      case Impl::Kind::FixedScaled: {
        const Cx scale = a + b;
        const Cx v = im.pool[row.target_poly].value_grad(ws, scale, J, r);
        if (H) (*H)[r] = scale * v;
        if (dHdt) (*dHdt)[r] = (Cx(1.0) - gamma_) * v;
        break;
      }
      case Impl::Kind::Chart: {
        const Cx v = im.pool[row.target_poly].value_grad(ws, Cx(1.0), J, r);
        if (H) (*H)[r] = v;
        if (dHdt) (*dHdt)[r] = Cx(0.0);
        break;
      }
    }
  }
}

Homotopy make_straight_line(PolySystem start, PolySystem target, Cx gamma,
                            std::vector<MPoly> charts,
                            std::vector<RowHint> start_hints) {
  if (start.size() != target.size())
    throw std::invalid_argument("make_straight_line: row count mismatch");
  if (!start.ring->same_structure(*target.ring))
    throw std::invalid_argument("make_straight_line: rings differ");
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12)
    throw std::invalid_argument("make_straight_line: gamma must have unit modulus");
  for (int i = 0; i < start.size(); ++i) {
    const auto& s = start.polys[i];
    const auto& g = target.polys[i];
    if (s.is_zero() != g.is_zero())
      throw std::invalid_argument("make_straight_line: zero row against nonzero row");
    if (s.is_zero()) continue;
    if (s.multidegree() != g.multidegree())
      throw std::invalid_argument(
          "make_straight_line: row " + std::to_string(i) +
          " has mismatched degrees; the family would not stay homogeneous");
  }
  if (!start_hints.empty() &&
      start_hints.size() != static_cast<size_t>(start.size()))
    throw std::invalid_argument("make_straight_line: hint count mismatch");
  return Homotopy(std::move(start), std::move(target), gamma, std::move(charts),
                  std::move(start_hints));
}

// ---------------------------------------------------------------------------
// EliminatedHomotopy

EliminatedHomotopy::EliminatedHomotopy(Homotopy full, ElimMode mode,
                                       std::vector<Substitution> subs,
                                       double t_star)
    : full_(std::move(full)), mode_(mode), subs_(std::move(subs)), t_star_(t_star) {
  if (mode_ == ElimMode::HomotopyEquation && !(t_star_ > 0.0))
    throw std::invalid_argument("eliminate: mode (b) needs t_star > 0");
  const int nv = full_.nvars();
  const int nr = full_.dim();
  std::vector<bool> var_gone(nv, false), row_gone(nr, false);
  for (const auto& s : subs_) {
    if (s.var < 0 || s.var >= nv || s.row < 0 || s.row >= nr)
      throw std::invalid_argument("eliminate: substitution out of range");
    var_gone[s.var] = true;
    row_gone[s.row] = true;
  }
  for (int v = 0; v < nv; ++v)
    if (!var_gone[v]) kept_.push_back(v);
  for (int r = 0; r < nr; ++r)
    if (!row_gone[r]) kept_rows_.push_back(r);

  for (const auto& s : subs_) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(nv);
    Cx c0(0.0);
    for (const auto& [e, k] : s.defining.terms()) {
      int var = -1;
      for (int v = 0; v < nv; ++v) {
        if (e[v] == 0) continue;
        if (e[v] > 1 || var >= 0)
          throw std::invalid_argument("eliminate: defining row is not linear");
        var = v;
      }
      if (var < 0)
        c0 += k;
      else
        c[var] += k;
    }
    if (mode_ == ElimMode::Chart && c[s.var] == Cx(0.0))
      throw std::invalid_argument("eliminate: chart does not involve the cone variable");
    def_coeffs_.push_back(std::move(c));
    def_const_.push_back(c0);
  }
}

int EliminatedHomotopy::dim() const {
  return static_cast<int>(kept_rows_.size());
}

void EliminatedHomotopy::substitution_values(const Eigen::VectorXcd& x_full,
                                             double t, std::vector<Cx>& u,
                                             std::vector<Cx>& du_dt) const {
  const int m = static_cast<int>(subs_.size());
  u.resize(m);
  du_dt.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto& c = def_coeffs_[i];
    if (mode_ == ElimMode::Chart) {
      Cx rest = def_const_[i];
      for (int v = 0; v < c.size(); ++v)
        if (v != subs_[i].var && c[v] != Cx(0.0)) rest += c[v] * x_full[v];
      u[i] = -rest / c[subs_[i].var];
      du_dt[i] = Cx(0.0);
    } else {
      Cx lval = def_const_[i];
      for (int v = 0; v < c.size(); ++v)
        if (c[v] != Cx(0.0)) lval += c[v] * x_full[v];
      const Cx g = full_.gamma();
      u[i] = -(1.0 - t) * g * lval / t;
      du_dt[i] = g * lval / (t * t);
    }
  }
}

Eigen::VectorXcd EliminatedHomotopy::lift_point(const Eigen::VectorXcd& x_red,
                                                double t) const {
  if (mode_ == ElimMode::HomotopyEquation && t <= 0.0)
    throw std::invalid_argument("eliminate: mode (b) undefined at t = 0");
  Eigen::VectorXcd xf = Eigen::VectorXcd::Zero(full_.nvars());
  for (size_t j = 0; j < kept_.size(); ++j) xf[kept_[j]] = x_red[j];
  std::vector<Cx> u, du;
  substitution_values(xf, t, u, du);
  for (size_t i = 0; i < subs_.size(); ++i) xf[subs_[i].var] = u[i];
  return xf;
}

Eigen::VectorXcd EliminatedHomotopy::reduce_point(
    const Eigen::VectorXcd& x_full) const {
  Eigen::VectorXcd xr(kept_.size());
  for (size_t j = 0; j < kept_.size(); ++j) xr[j] = x_full[kept_[j]];
  return xr;
}

void EliminatedHomotopy::eval_all(const Eigen::VectorXcd& x, double t,
                                  Eigen::VectorXcd* H, Eigen::MatrixXcd* J,
                                  Eigen::VectorXcd* dHdt) const {
  if (mode_ == ElimMode::HomotopyEquation && t < t_star_ - 1e-12)
    throw std::invalid_argument("eliminate: evaluation below the activation threshold");
  const Eigen::VectorXcd xf = lift_point(x, t);

  Eigen::VectorXcd Hf;
  Eigen::MatrixXcd Jf;
  Eigen::VectorXcd dtf;
  const bool need_jf = (J != nullptr) || (dHdt != nullptr);
  full_.eval_all(xf, t, H ? &Hf : nullptr, need_jf ? &Jf : nullptr,
                 dHdt ? &dtf : nullptr);

  const int nr = dim();
  const int nv = nvars();
  std::vector<Cx> u, du_dt;
  if (need_jf) substitution_values(xf, t, u, du_dt);

  if (H) {
    H->resize(nr);
    for (int r = 0; r < nr; ++r) (*H)[r] = Hf[kept_rows_[r]];
  }
  if (J) {
    J->resize(nr, nv);
    for (int r = 0; r < nr; ++r) {
      const int fr = kept_rows_[r];
      for (int j = 0; j < nv; ++j) (*J)(r, j) = Jf(fr, kept_[j]);
      for (size_t m = 0; m < subs_.size(); ++m) {
        const Cx ju = Jf(fr, subs_[m].var);
        if (ju == Cx(0.0)) continue;
        const auto& c = def_coeffs_[m];
        if (mode_ == ElimMode::Chart) {
          const Cx inv = Cx(-1.0) / c[subs_[m].var];
          for (int j = 0; j < nv; ++j)
            if (c[kept_[j]] != Cx(0.0)) (*J)(r, j) += ju * inv * c[kept_[j]];
        } else {
          const Cx s = -(1.0 - t) * full_.gamma() / t;
          for (int j = 0; j < nv; ++j)
            if (c[kept_[j]] != Cx(0.0)) (*J)(r, j) += ju * s * c[kept_[j]];
        }
      }
    }
  }
  if (dHdt) {
    dHdt->resize(nr);
    for (int r = 0; r < nr; ++r) {
      const int fr = kept_rows_[r];
      Cx v = dtf[fr];
      for (size_t m = 0; m < subs_.size(); ++m)
        v += Jf(fr, subs_[m].var) * du_dt[m];
      (*dHdt)[r] = v;
    }
  }
}

}  // namespace ugen
