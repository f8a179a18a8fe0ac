#pragma once

// Gacs-Korner common randomness of two (grouped) variables: the connected
// components of the bipartite support graph between the left and right
// symbol sets.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "crr/probability.hpp"

namespace crr {

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  void unite(std::size_t a, std::size_t b);

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct GKPartition {
  static constexpr std::size_t kUnsupported =
      std::numeric_limits<std::size_t>::max();

  VarList left_vars;
  VarList right_vars;
  /// Alphabets of the grouped sides; symbols are flattened row-major.
  std::vector<Alphabet> left_alphabets;
  std::vector<Alphabet> right_alphabets;
  /// Class id per flattened symbol, kUnsupported for zero-marginal symbols.
  /// A class id is the smallest flattened right-symbol index in the component.
  std::vector<std::size_t> class_of_left;
  std::vector<std::size_t> class_of_right;
  /// Supported class ids in increasing order, with their probabilities.
  std::vector<std::size_t> class_ids;
  std::vector<double> class_mass;

  std::size_t class_count() const noexcept { return class_ids.size(); }
  /// Position of `id` in class_ids.
  std::size_t class_index(std::size_t id) const;
  /// Flattened right symbol rendered as "y1,y2,..".
  std::string right_label(std::size_t flat) const;
  /// Number of supported left (resp. right) symbols in each class.
  std::vector<std::size_t> left_counts() const;
  std::vector<std::size_t> right_counts() const;
};

GKPartition gk_partition(const JointPmf &p, const VarList &left,
                         const VarList &right);

/// pmf of the class label. Symbols are the representative right labels.
JointPmf gk_variable(const GKPartition &part, std::string name = "GK");

/// `p` extended by the class label as a new variable `name`. The label is a
/// deterministic function of either side on the support of `p`.
JointPmf with_gk(const JointPmf &p, const GKPartition &part, std::string name);

/// Number of equivalent labelings that pick one left symbol per component.
std::size_t mapping_choices(const GKPartition &part);

/// H(X|Y) <= tol and H(Y|X) <= tol.
bool rv_equivalent(const JointPmf &p, const VarList &x, const VarList &y,
                   double tol = kInfoTol);

struct PartitionCheck {
  bool holds = false;
  std::size_t combined_classes = 0;
  std::size_t first_classes = 0;
  std::size_t second_classes = 0;
};

/// Forms q_{A1A2} x q_{UV} and tests GK^{A1U,A2V} == (GK^{A1,A2}, GK^{U,V}).
/// Each argument has exactly two variables, (left, right).
PartitionCheck verify_product_partition(const JointPmf &q_a1a2, const JointPmf &q_uv);

/// Forms q_{XY} x q_Z and tests GK^{X,YZ} == GK^{X,Y}.
PartitionCheck verify_independent_padding(const JointPmf &q_xy, const JointPmf &q_z);

} // namespace crr
