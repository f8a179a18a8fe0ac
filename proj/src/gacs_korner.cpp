#include "crr/gacs_korner.hpp"

#include <algorithm>
#include <numeric>

#include "crr/errors.hpp"

namespace crr {

namespace {

std::size_t group_size(const std::vector<Alphabet> &alphabets) {
  std::size_t n = 1;
  for (const auto &a : alphabets) n *= a.size();
  return n;
}

/// Flattened group index of `cell` for the variables `idx` of `p`.
std::size_t group_index(const JointPmf &p, std::size_t cell,
                        const std::vector<std::size_t> &idx) {
  std::size_t g = 0;
  for (std::size_t i : idx)
    g = g * p.shape()[i] + (cell / p.strides()[i]) % p.shape()[i];
  return g;
}

std::vector<std::size_t> indices_of(const JointPmf &p, const VarList &vars) {
  std::vector<std::size_t> out;
  for (const auto &v : vars) out.push_back(p.var_index(v));
  return out;
}

void require_pair(const JointPmf &q, const char *what) {
  if (q.rank() != 2)
    throw PreconditionError(std::string(what) + " must have two variables");
}

} // namespace

UnionFind::UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

void UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
}

std::size_t GKPartition::class_index(std::size_t id) const {
  const auto it = std::lower_bound(class_ids.begin(), class_ids.end(), id);
  if (it == class_ids.end() || *it != id)
    throw PreconditionError("unknown GK class id " + std::to_string(id));
  return static_cast<std::size_t>(it - class_ids.begin());
}

std::string GKPartition::right_label(std::size_t flat) const {
  std::vector<std::string> parts(right_alphabets.size());
  for (std::size_t i = right_alphabets.size(); i-- > 0;) {
    parts[i] = right_alphabets[i].symbol(flat % right_alphabets[i].size());
    flat /= right_alphabets[i].size();
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::size_t> GKPartition::left_counts() const {
  std::vector<std::size_t> counts(class_ids.size(), 0);
  for (std::size_t c : class_of_left)
    if (c != kUnsupported) ++counts[class_index(c)];
  return counts;
}

std::vector<std::size_t> GKPartition::right_counts() const {
  std::vector<std::size_t> counts(class_ids.size(), 0);
  for (std::size_t c : class_of_right)
    if (c != kUnsupported) ++counts[class_index(c)];
  return counts;
}

GKPartition gk_partition(const JointPmf &p, const VarList &left,
                         const VarList &right) {
  if (left.empty() || right.empty())
    throw PreconditionError("GK partition needs non-empty sides");
  VarList both = left;
  both.insert(both.end(), right.begin(), right.end());
  if (both.size() != p.rank())
    throw PreconditionError("GK sides must cover every variable of the pmf");
  // marginal_masses rejects overlapping or unknown names.
  const auto joint = marginal_masses(p, both);

  GKPartition part;
  part.left_vars = left;
  part.right_vars = right;
  for (const auto &v : left) part.left_alphabets.push_back(p.variable(v));
  for (const auto &v : right) part.right_alphabets.push_back(p.variable(v));
  const std::size_t nl = group_size(part.left_alphabets);
  const std::size_t nr = group_size(part.right_alphabets);

  UnionFind uf(nl + nr);
  std::vector<double> left_mass(nl, 0.0), right_mass(nr, 0.0);
  bool any = false;
  for (std::size_t l = 0; l < nl; ++l)
    for (std::size_t r = 0; r < nr; ++r) {
      const double m = joint[l * nr + r];
      if (!(m > kSupportEps)) continue;
      any = true;
      uf.unite(l, nl + r);
      left_mass[l] += m;
      right_mass[r] += m;
    }
  if (!any) throw DegenerateError("GK partition of a pmf with empty support");

  // Canonical id: the smallest supported right symbol in the component.
  std::vector<std::size_t> root_id(nl + nr, GKPartition::kUnsupported);
  for (std::size_t r = 0; r < nr; ++r) {
    if (right_mass[r] == 0.0) continue;
    auto &id = root_id[uf.find(nl + r)];
    id = std::min(id, r);
  }
  part.class_of_left.assign(nl, GKPartition::kUnsupported);
  part.class_of_right.assign(nr, GKPartition::kUnsupported);
  for (std::size_t l = 0; l < nl; ++l)
    if (left_mass[l] > 0.0) part.class_of_left[l] = root_id[uf.find(l)];
  for (std::size_t r = 0; r < nr; ++r)
    if (right_mass[r] > 0.0) part.class_of_right[r] = root_id[uf.find(nl + r)];

  for (std::size_t r = 0; r < nr; ++r)
    if (part.class_of_right[r] == r) part.class_ids.push_back(r);
  part.class_mass.assign(part.class_ids.size(), 0.0);
  for (std::size_t r = 0; r < nr; ++r)
    if (part.class_of_right[r] != GKPartition::kUnsupported)
      part.class_mass[part.class_index(part.class_of_right[r])] += right_mass[r];
  return part;
}

JointPmf gk_variable(const GKPartition &part, std::string name) {
  std::vector<std::string> labels;
  for (std::size_t id : part.class_ids) labels.push_back(part.right_label(id));
  double total = 0.0;
  for (double m : part.class_mass) total += m;
  std::vector<double> mass = part.class_mass;
  for (double &m : mass) m /= total;
  return JointPmf({Alphabet(std::move(name), std::move(labels))},
                  std::move(mass));
}

JointPmf with_gk(const JointPmf &p, const GKPartition &part, std::string name) {
  if (p.has_variable(name))
    throw PreconditionError("variable '" + name + "' already present");
  const auto li = indices_of(p, part.left_vars);
  const std::size_t k = part.class_count();
  std::vector<double> mass(p.cells() * k, 0.0);
  for (std::size_t cell = 0; cell < p.cells(); ++cell) {
    if (p[cell] == 0.0) continue;
    std::size_t c = part.class_of_left[group_index(p, cell, li)];
    // Sub-threshold cells may touch unsupported symbols; park them in class 0.
    const std::size_t slot =
        c == GKPartition::kUnsupported ? 0 : part.class_index(c);
    mass[cell * k + slot] = p[cell];
  }
  std::vector<std::string> labels;
  for (std::size_t id : part.class_ids) labels.push_back(part.right_label(id));
  auto vars = p.variables();
  vars.emplace_back(std::move(name), std::move(labels));
  return JointPmf(std::move(vars), std::move(mass));
}

std::size_t mapping_choices(const GKPartition &part) {
  std::size_t n = 1;
  for (std::size_t c : part.left_counts()) n *= c;
  return n;
}

bool rv_equivalent(const JointPmf &p, const VarList &x, const VarList &y,
                   double tol) {
  VarList both = x;
  for (const auto &v : y)
    if (std::find(x.begin(), x.end(), v) == x.end()) both.push_back(v);
  const double h_both = entropy(p, both);
  return h_both - entropy(p, y) <= tol && h_both - entropy(p, x) <= tol;
}

PartitionCheck verify_product_partition(const JointPmf &q_a1a2, const JointPmf &q_uv) {
  require_pair(q_a1a2, "q_A1A2");
  require_pair(q_uv, "q_UV");
  const auto a = q_a1a2.names();
  const auto u = q_uv.names();
  const JointPmf joint = JointPmf::product(q_a1a2, q_uv);

  const auto combined = gk_partition(joint, {a[0], u[0]}, {a[1], u[1]});
  const auto first = gk_partition(q_a1a2, {a[0]}, {a[1]});
  const auto second = gk_partition(q_uv, {u[0]}, {u[1]});

  JointPmf ext = with_gk(joint, combined, "#GK");
  ext = with_gk(ext, first, "#GK1");
  ext = with_gk(ext, second, "#GK2");
  // with_gk reads only the left variables, so the extra columns are ignored.
  return {rv_equivalent(ext, {"#GK"}, {"#GK1", "#GK2"}),
          combined.class_count(), first.class_count(), second.class_count()};
}

PartitionCheck verify_independent_padding(const JointPmf &q_xy, const JointPmf &q_z) {
  require_pair(q_xy, "q_XY");
  if (q_z.rank() != 1) throw PreconditionError("q_Z must have one variable");
  const auto xy = q_xy.names();
  const auto z = q_z.names();
  const JointPmf joint = JointPmf::product(q_xy, q_z);

  const auto combined = gk_partition(joint, {xy[0]}, {xy[1], z[0]});
  const auto base = gk_partition(q_xy, {xy[0]}, {xy[1]});
  JointPmf ext = with_gk(joint, combined, "#GK");
  ext = with_gk(ext, base, "#GK1");
  return {rv_equivalent(ext, {"#GK"}, {"#GK1"}), combined.class_count(),
          base.class_count(), 1};
}

} // namespace crr
