#include "ugen/mpoly.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace ugen {
namespace {

int total_deg(const ExpVec& e) {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

void check_same_ring(const MPoly& a, const MPoly& b) {
  if (!a.ring() || !b.ring()) throw std::invalid_argument("mpoly: null ring");
  if (a.ring() != b.ring() && !a.ring()->same_structure(*b.ring()))
    throw std::invalid_argument("mpoly: operands over different rings");
}

/// Shortest decimal digit string that parses back to exactly x.
std::string round_trip_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  return buf;
}

}  // namespace

bool GradedLexLess::operator()(const ExpVec& a, const ExpVec& b) const {
  const int da = total_deg(a);
  const int db = total_deg(b);
  if (da != db) return da < db;
  return a < b;
}

MPoly MPoly::constant(RingPtr ring, Cx c) {
  MPoly p(std::move(ring));
  p.add_term(ExpVec(p.ring_->nvars(), 0), c);
  return p;
}

MPoly MPoly::variable(RingPtr ring, int var, int power) {
  if (var < 0 || var >= ring->nvars())
    throw std::invalid_argument("mpoly: variable index out of range");
  MPoly p(std::move(ring));
  ExpVec e(p.ring_->nvars(), 0);
  e[var] = static_cast<std::uint8_t>(power);
  p.add_term(e, Cx(1.0));
  return p;
}

MPoly MPoly::linear(RingPtr ring, std::span<const Cx> coeffs, Cx c0) {
  if (static_cast<int>(coeffs.size()) != ring->nvars())
    throw std::invalid_argument("mpoly: linear coefficient count");
  MPoly p(ring);
  const int n = ring->nvars();
  for (int v = 0; v < n; ++v) {
    if (coeffs[v] == Cx(0.0)) continue;
    ExpVec e(n, 0);
    e[v] = 1;
    p.add_term(e, coeffs[v]);
  }
  if (c0 != Cx(0.0)) p.add_term(ExpVec(n, 0), c0);
  return p;
}

MPoly MPoly::group_linear(RingPtr ring, int group, std::span<const Cx> coeffs,
                          Cx c0) {
  const auto& gv = ring->group(group);
  if (coeffs.size() != gv.size())
    throw std::invalid_argument("mpoly: group linear coefficient count");
  std::vector<Cx> full(ring->nvars(), Cx(0.0));
  for (size_t i = 0; i < gv.size(); ++i) full[gv[i]] = coeffs[i];
  return linear(std::move(ring), full, c0);
}

void MPoly::add_term(const ExpVec& exp, Cx c) {
  if (!ring_) throw std::invalid_argument("mpoly: null ring");
  if (static_cast<int>(exp.size()) != ring_->nvars())
    throw std::invalid_argument("mpoly: exponent vector length");
  if (c == Cx(0.0)) return;
  auto it = terms_.find(exp);
  if (it == terms_.end()) {
    terms_.emplace(exp, c);
  } else {
    it->second += c;
    if (it->second == Cx(0.0)) terms_.erase(it);
  }
}

MPoly MPoly::operator+(const MPoly& o) const {
  check_same_ring(*this, o);
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  check_same_ring(*this, o);
  MPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

MPoly MPoly::operator-() const { return scaled(Cx(-1.0)); }

MPoly MPoly::scaled(Cx c) const {
  MPoly r(ring_);
  if (c == Cx(0.0)) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  check_same_ring(*this, o);
  MPoly r(ring_);
  const int n = ring_->nvars();
  ExpVec e(n);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (int v = 0; v < n; ++v) {
        const int s = ea[v] + eb[v];
        if (s > 255) throw std::overflow_error("mpoly: exponent overflow");
        e[v] = static_cast<std::uint8_t>(s);
      }
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

MPoly MPoly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("mpoly: negative power");
  MPoly r = MPoly::constant(ring_, Cx(1.0));
  MPoly base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return r;
}

bool MPoly::operator==(const MPoly& o) const {
  if (!ring_ || !o.ring_) return terms_.empty() && o.terms_.empty();
  if (ring_ != o.ring_ && !ring_->same_structure(*o.ring_)) return false;
  return terms_ == o.terms_;
}

Cx MPoly::evaluate(std::span<const Cx> x) const {
  if (static_cast<int>(x.size()) != ring_->nvars())
    throw std::invalid_argument("mpoly: point dimension mismatch");
  const int n = ring_->nvars();
  // Per-variable power tables up to the maximum exponent in the support.
  std::vector<int> maxe(n, 0);
  for (const auto& [e, c] : terms_)
    for (int v = 0; v < n; ++v) maxe[v] = std::max(maxe[v], int(e[v]));
  std::vector<std::vector<Cx>> pw(n);
  for (int v = 0; v < n; ++v) {
    pw[v].resize(maxe[v] + 1);
    pw[v][0] = Cx(1.0);
    for (int k = 1; k <= maxe[v]; ++k) pw[v][k] = pw[v][k - 1] * x[v];
  }
  Cx acc(0.0);
  for (const auto& [e, c] : terms_) {
    Cx m = c;
    for (int v = 0; v < n; ++v)
      if (e[v]) m *= pw[v][e[v]];
    acc += m;
  }
  return acc;
}

Cx MPoly::evaluate(const Eigen::VectorXcd& x) const {
  return evaluate(std::span<const Cx>(x.data(), x.size()));
}

MPoly MPoly::derivative(int var) const {
  if (var < 0 || var >= ring_->nvars())
    throw std::invalid_argument("mpoly: derivative variable out of range");
  MPoly r(ring_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    ExpVec d = e;
    d[var] -= 1;
    r.add_term(d, c * double(e[var]));
  }
  return r;
}

std::vector<int> MPoly::multidegree() const {
  if (terms_.empty())
    throw std::invalid_argument("mpoly: multidegree of the zero polynomial");
  const int k = ring_->ngroups();
  std::vector<int> deg(k, 0);
  for (const auto& [e, c] : terms_) {
    for (int g = 0; g < k; ++g) {
      int s = 0;
      for (int v : ring_->group(g)) s += e[v];
      deg[g] = std::max(deg[g], s);
    }
  }
  return deg;
}

int MPoly::total_degree() const {
  if (terms_.empty()) return -1;
  return total_deg(terms_.rbegin()->first);
}

int MPoly::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, int(e[var]));
  return d;
}

bool MPoly::is_group_homogeneous() const {
  if (terms_.empty()) return true;
  const int k = ring_->ngroups();
  std::vector<int> ref(k, -1);
  for (const auto& [e, c] : terms_) {
    for (int g = 0; g < k; ++g) {
      int s = 0;
      for (int v : ring_->group(g)) s += e[v];
      if (ref[g] < 0)
        ref[g] = s;
      else if (ref[g] != s)
        return false;
    }
  }
  return true;
}

MPoly MPoly::specialize(const std::vector<std::pair<int, Cx>>& assignments) const {
  std::vector<int> assigned(ring_->nvars(), -1);
  for (int i = 0; i < static_cast<int>(assignments.size()); ++i) {
    const int v = assignments[i].first;
    if (v < 0 || v >= ring_->nvars())
      throw std::invalid_argument("mpoly: specialize variable out of range");
    assigned[v] = i;
  }
  MPoly r(ring_);
  for (const auto& [e, c] : terms_) {
    Cx coeff = c;
    ExpVec rest = e;
    for (int v = 0; v < ring_->nvars(); ++v) {
      if (assigned[v] < 0 || e[v] == 0) continue;
      Cx p(1.0);
      for (int k = 0; k < int(e[v]); ++k) p *= assignments[assigned[v]].second;
      coeff *= p;
      rest[v] = 0;
    }
    r.add_term(rest, coeff);
  }
  return r;
}

MPoly MPoly::to_ring(RingPtr target, const std::vector<int>& var_map) const {
  if (static_cast<int>(var_map.size()) != ring_->nvars())
    throw std::invalid_argument("mpoly: var_map length");
  MPoly r(target);
  const int m = target->nvars();
  for (const auto& [e, c] : terms_) {
    ExpVec f(m, 0);
    for (int v = 0; v < ring_->nvars(); ++v) {
      if (e[v] == 0) continue;
      if (var_map[v] < 0)
        throw std::invalid_argument("mpoly: recast drops a used variable (" +
                                    ring_->var_name(v) + ")");
      f[var_map[v]] = e[v];
    }
    r.add_term(f, c);
  }
  return r;
}

MPoly MPoly::to_ring(RingPtr target) const {
  std::vector<int> var_map(ring_->nvars());
  for (int v = 0; v < ring_->nvars(); ++v)
    var_map[v] = target->var_index(ring_->var_name(v));
  return to_ring(std::move(target), var_map);
}

double MPoly::coeff_scale() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += std::abs(c);
  return s;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "(0+0*i)";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) out += " + ";
    first = false;
    const Cx c = it->second;
    out += "(" + round_trip_double(c.real());
    out += (c.imag() < 0.0 || (c.imag() == 0.0 && std::signbit(c.imag()))) ? "-" : "+";
    out += round_trip_double(std::abs(c.imag())) + "*i)";
    for (int v = 0; v < ring_->nvars(); ++v) {
      const int e = it->first[v];
      if (e == 0) continue;
      out += "*" + ring_->var_name(v);
      if (e > 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

MPoly homogenize(const MPoly& p, RingPtr target) {
  MPoly q = p.to_ring(target);
  if (q.is_zero()) return q;
  const auto deg = q.multidegree();
  MPoly r(target);
  for (const auto& [e, c] : q.terms()) {
    ExpVec f = e;
    for (int g = 0; g < target->ngroups(); ++g) {
      const int h = target->homog_var(g);
      if (h < 0) continue;
      int s = 0;
      for (int v : target->group(g)) s += e[v];
      const int deficit = deg[g] - s;
      if (deficit < 0 || deficit + f[h] > 255)
        throw std::overflow_error("mpoly: homogenize exponent overflow");
      f[h] = static_cast<std::uint8_t>(f[h] + deficit);
    }
    r.add_term(f, c);
  }
  return r;
}

MPoly dehomogenize(const MPoly& p, RingPtr target) {
  std::vector<std::pair<int, Cx>> assign;
  const auto& ring = p.ring();
  for (int g = 0; g < ring->ngroups(); ++g)
    if (ring->homog_var(g) >= 0) assign.emplace_back(ring->homog_var(g), Cx(1.0));
  return p.specialize(assign).to_ring(std::move(target));
}

// ---------------------------------------------------------------------------
// PolySystem

namespace {
struct JacHolder {
  std::once_flag once;
  std::vector<std::vector<MPoly>> polys;
};
}  // namespace

PolySystem::PolySystem(RingPtr r, std::vector<MPoly> p)
    : ring(std::move(r)), polys(std::move(p)) {
  for (const auto& q : polys) {
    if (q.ring() != ring && (!q.ring() || !q.ring()->same_structure(*ring)))
      throw std::invalid_argument("system: polynomial over a different ring");
  }
}

Eigen::VectorXcd PolySystem::evaluate(const Eigen::VectorXcd& x) const {
  Eigen::VectorXcd out(size());
  for (int i = 0; i < size(); ++i) out[i] = polys[i].evaluate(x);
  return out;
}

const std::vector<std::vector<MPoly>>& PolySystem::jacobian_polys() const {
  static std::mutex cache_mutex;
  std::scoped_lock lock(cache_mutex);
  if (!jac_cache_) {
    auto holder = std::make_shared<std::vector<std::vector<MPoly>>>();
    holder->resize(polys.size());
    for (size_t i = 0; i < polys.size(); ++i) {
      (*holder)[i].reserve(ring->nvars());
      for (int v = 0; v < ring->nvars(); ++v)
        (*holder)[i].push_back(polys[i].derivative(v));
    }
    jac_cache_ = std::move(holder);
  }
  return *jac_cache_;
}

Eigen::MatrixXcd PolySystem::jacobian(const Eigen::VectorXcd& x) const {
  if (x.size() != ring->nvars())
    throw std::invalid_argument("system: point dimension mismatch");
  const auto& jp = jacobian_polys();
  Eigen::MatrixXcd J(size(), ring->nvars());
  for (int i = 0; i < size(); ++i)
    for (int v = 0; v < ring->nvars(); ++v) J(i, v) = jp[i][v].evaluate(x);
  return J;
}

std::vector<std::vector<int>> PolySystem::multidegrees() const {
  std::vector<std::vector<int>> out;
  out.reserve(polys.size());
  for (const auto& p : polys) out.push_back(p.multidegree());
  return out;
}

bool PolySystem::is_group_homogeneous() const {
  return std::all_of(polys.begin(), polys.end(),
                     [](const MPoly& p) { return p.is_group_homogeneous(); });
}

PolySystem homogenize_system(const PolySystem& F) {
  RingPtr target = F.ring->with_homogenizers();
  std::vector<MPoly> polys;
  polys.reserve(F.polys.size());
  for (const auto& p : F.polys) polys.push_back(homogenize(p, target));
  return PolySystem(target, std::move(polys));
}

Cx evaluate(const MPoly& p, std::span<const Cx> x) { return p.evaluate(x); }

Eigen::MatrixXcd jacobian(const PolySystem& F, const Eigen::VectorXcd& x) {
  return F.jacobian(x);
}

}  // namespace ugen
