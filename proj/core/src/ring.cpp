#include "ugen/ring.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ugen {
namespace {

std::string fresh_name(const std::vector<std::string>& taken,
                       const std::string& base) {
  std::string name = base;
  while (std::find(taken.begin(), taken.end(), name) != taken.end())
    name += "_";
  return name;
}

}  // namespace

RingPtr Ring::make(std::vector<std::string> vars,
                   std::vector<std::vector<int>> groups,
                   std::vector<int> homog_var, std::vector<int> cone_var) {
  auto ring = std::shared_ptr<Ring>(new Ring());
  const int n = static_cast<int>(vars.size());
  if (groups.empty()) throw std::invalid_argument("ring: needs at least one group");
  if (homog_var.empty()) homog_var.assign(groups.size(), -1);
  if (cone_var.empty()) cone_var.assign(groups.size(), -1);
  if (homog_var.size() != groups.size() || cone_var.size() != groups.size())
    throw std::invalid_argument("ring: per-group vectors sized to group count");

  ring->group_of_.assign(n, -1);
  std::set<std::string> names;
  for (const auto& name : vars) {
    if (name.empty() || !names.insert(name).second)
      throw std::invalid_argument("ring: empty or duplicate variable name");
  }
  for (int g = 0; g < static_cast<int>(groups.size()); ++g) {
    for (int v : groups[g]) {
      if (v < 0 || v >= n || ring->group_of_[v] != -1)
        throw std::invalid_argument("ring: groups must partition the variables");
      ring->group_of_[v] = g;
    }
    if (homog_var[g] >= 0 &&
        (homog_var[g] >= n ||
         std::find(groups[g].begin(), groups[g].end(), homog_var[g]) == groups[g].end()))
      throw std::invalid_argument("ring: homogenizing variable outside its group");
    if (cone_var[g] >= 0 &&
        (cone_var[g] >= n ||
         std::find(groups[g].begin(), groups[g].end(), cone_var[g]) == groups[g].end()))
      throw std::invalid_argument("ring: cone variable outside its group");
  }
  for (int v = 0; v < n; ++v)
    if (ring->group_of_[v] == -1)
      throw std::invalid_argument("ring: variable not covered by any group");

  ring->vars_ = std::move(vars);
  ring->groups_ = std::move(groups);
  ring->homog_var_ = std::move(homog_var);
  ring->cone_var_ = std::move(cone_var);
  return ring;
}

RingPtr Ring::affine(std::vector<std::string> vars) {
  std::vector<int> all(vars.size());
  for (int i = 0; i < static_cast<int>(vars.size()); ++i) all[i] = i;
  return make(std::move(vars), {all});
}

bool Ring::has_homogenizers() const {
  return std::any_of(homog_var_.begin(), homog_var_.end(),
                     [](int v) { return v >= 0; });
}

bool Ring::has_cone_vars() const {
  return std::any_of(cone_var_.begin(), cone_var_.end(),
                     [](int v) { return v >= 0; });
}

int Ring::var_index(const std::string& name) const {
  for (int i = 0; i < nvars(); ++i)
    if (vars_[i] == name) return i;
  return -1;
}

RingPtr Ring::with_homogenizers() const {
  auto vars = vars_;
  auto groups = groups_;
  auto homog = homog_var_;
  auto cone = cone_var_;
  const bool single = ngroups() == 1;
  for (int g = 0; g < ngroups(); ++g) {
    if (homog[g] >= 0) continue;
    const std::string base = single ? "h" : "h" + std::to_string(g + 1);
    const int idx = static_cast<int>(vars.size());
    vars.push_back(fresh_name(vars, base));
    groups[g].push_back(idx);
    homog[g] = idx;
  }
  return make(std::move(vars), std::move(groups), std::move(homog), std::move(cone));
}

RingPtr Ring::with_cone_vars() const {
  auto vars = vars_;
  auto groups = groups_;
  auto homog = homog_var_;
  auto cone = cone_var_;
  const bool single = ngroups() == 1;
  for (int g = 0; g < ngroups(); ++g) {
    if (cone[g] >= 0) throw std::invalid_argument("ring: cone variable already present");
    const std::string base = single ? "u" : "u" + std::to_string(g + 1);
    const int idx = static_cast<int>(vars.size());
    vars.push_back(fresh_name(vars, base));
    groups[g].push_back(idx);
    cone[g] = idx;
  }
  return make(std::move(vars), std::move(groups), std::move(homog), std::move(cone));
}

RingPtr Ring::without_cone_vars() const {
  std::vector<int> keep;
  std::vector<int> new_index(nvars(), -1);
  for (int v = 0; v < nvars(); ++v) {
    bool is_cone = false;
    for (int g = 0; g < ngroups(); ++g)
      if (cone_var_[g] == v) is_cone = true;
    if (!is_cone) {
      new_index[v] = static_cast<int>(keep.size());
      keep.push_back(v);
    }
  }
  std::vector<std::string> vars;
  vars.reserve(keep.size());
  for (int v : keep) vars.push_back(vars_[v]);
  std::vector<std::vector<int>> groups(ngroups());
  std::vector<int> homog(ngroups(), -1);
  for (int g = 0; g < ngroups(); ++g) {
    for (int v : groups_[g])
      if (new_index[v] >= 0) groups[g].push_back(new_index[v]);
    if (homog_var_[g] >= 0) homog[g] = new_index[homog_var_[g]];
  }
  return make(std::move(vars), std::move(groups), std::move(homog));
}

bool Ring::same_structure(const Ring& other) const {
  return vars_ == other.vars_ && groups_ == other.groups_ &&
         homog_var_ == other.homog_var_ && cone_var_ == other.cone_var_;
}

}  // namespace ugen
