#pragma once

#include <memory>
#include <string>
#include <vector>

namespace ugen {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// An ordered set of variables partitioned into groups. Each group spans one
/// projective (or affine) factor of the ambient space. A group may designate
/// a homogenizing variable and, separately, a cone variable added when the
/// variety is lifted one dimension up.
class Ring {
 public:
  static RingPtr make(std::vector<std::string> vars,
                      std::vector<std::vector<int>> groups,
                      std::vector<int> homog_var = {},
                      std::vector<int> cone_var = {});

  /// Single-group ring over the given variable names.
  static RingPtr affine(std::vector<std::string> vars);

  int nvars() const { return static_cast<int>(vars_.size()); }
  int ngroups() const { return static_cast<int>(groups_.size()); }

  const std::vector<std::string>& vars() const { return vars_; }
  const std::string& var_name(int v) const { return vars_[v]; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }
  const std::vector<int>& group(int g) const { return groups_[g]; }
  int group_of(int var) const { return group_of_[var]; }

  /// Homogenizing variable of a group, -1 when none.
  int homog_var(int g) const { return homog_var_[g]; }
  /// Cone variable of a group, -1 when none.
  int cone_var(int g) const { return cone_var_[g]; }
  bool has_homogenizers() const;
  bool has_cone_vars() const;

  /// Index of a variable by name, -1 when absent.
  int var_index(const std::string& name) const;

  /// Extended ring with one homogenizing variable appended per group.
  RingPtr with_homogenizers() const;

  /// Extended ring with one cone variable appended per group.
  RingPtr with_cone_vars() const;

  /// Ring with the cone variables removed again.
  RingPtr without_cone_vars() const;

  bool same_structure(const Ring& other) const;

 private:
  Ring() = default;

  std::vector<std::string> vars_;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  std::vector<int> homog_var_;
  std::vector<int> cone_var_;
};

}  // namespace ugen
