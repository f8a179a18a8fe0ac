#include "crr/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <unordered_set>

#include "crr/errors.hpp"

namespace crr {

namespace {

std::vector<std::size_t> shape_of(const std::vector<Alphabet> &vars) {
  std::vector<std::size_t> shape;
  shape.reserve(vars.size());
  for (const auto &a : vars) shape.push_back(a.size());
  return shape;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t> &shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t i = shape.size(); i-- > 1;)
    strides[i - 1] = strides[i] * shape[i];
  return strides;
}

std::size_t product_size(const std::vector<Alphabet> &vars) {
  std::size_t n = 1;
  for (const auto &a : vars) n *= a.size();
  return n;
}

std::vector<std::size_t> resolve(const JointPmf &p, const VarList &vars) {
  std::vector<std::size_t> idx;
  idx.reserve(vars.size());
  for (const auto &v : vars) {
    const std::size_t i = p.var_index(v);
    if (std::find(idx.begin(), idx.end(), i) != idx.end())
      throw PreconditionError("variable listed twice: " + v);
    idx.push_back(i);
  }
  return idx;
}

void require_disjoint(std::initializer_list<const VarList *> lists) {
  std::set<std::string> seen;
  for (const auto *l : lists)
    for (const auto &v : *l)
      if (!seen.insert(v).second)
        throw PreconditionError("variable subsets overlap on " + v);
}

VarList concat(const VarList &a, const VarList &b) {
  VarList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

double entropy_of(std::span<const double> masses) {
  double h = 0.0;
  for (double m : masses)
    if (m > 0.0) h -= m * std::log2(m);
  return h;
}

void require_same_layout(const JointPmf &p, const JointPmf &q) {
  if (p.variables() != q.variables())
    throw PreconditionError("pmfs have different variable layouts");
}

} // namespace

// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::string name, std::vector<std::string> symbols)
    : name_(std::move(name)), symbols_(std::move(symbols)) {
  if (symbols_.empty())
    throw PreconditionError("alphabet '" + name_ + "' is empty");
  std::unordered_set<std::string> seen;
  for (const auto &s : symbols_)
    if (!seen.insert(s).second)
      throw PreconditionError("alphabet '" + name_ + "' repeats symbol '" + s +
                              "'");
}

Alphabet Alphabet::range(std::string name, std::size_t n) {
  std::vector<std::string> symbols;
  symbols.reserve(n);
  for (std::size_t i = 0; i < n; ++i) symbols.push_back(std::to_string(i));
  return Alphabet(std::move(name), std::move(symbols));
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == symbol) return i;
  throw PreconditionError("symbol '" + std::string(symbol) +
                          "' not in alphabet '" + name_ + "'");
}

Alphabet Alphabet::renamed(std::string name) const {
  return Alphabet(std::move(name), symbols_);
}

// ---------------------------------------------------------------------------

JointPmf::JointPmf(std::vector<Alphabet> variables, std::vector<double> mass)
    : vars_(std::move(variables)), mass_(std::move(mass)) {
  std::unordered_set<std::string> names;
  for (const auto &a : vars_)
    if (!names.insert(a.name()).second)
      throw PreconditionError("duplicate variable name '" + a.name() + "'");
  shape_ = shape_of(vars_);
  strides_ = strides_of(shape_);
  if (mass_.size() != product_size(vars_))
    throw PreconditionError("mass tensor has " + std::to_string(mass_.size()) +
                            " cells, expected " +
                            std::to_string(product_size(vars_)));
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m))
      throw PreconditionError("pmf entries must be finite and non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > kMassTol)
    throw PreconditionError("pmf total mass " + std::to_string(total) +
                            " differs from 1");
}

JointPmf JointPmf::uniform(std::vector<Alphabet> variables) {
  const std::size_t n = product_size(variables);
  return JointPmf(std::move(variables),
                  std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointPmf JointPmf::point_mass(std::vector<Alphabet> variables,
                              std::span<const std::size_t> at) {
  std::vector<double> mass(product_size(variables), 0.0);
  const auto strides = strides_of(shape_of(variables));
  if (at.size() != variables.size())
    throw PreconditionError("point mass index has wrong rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    if (at[i] >= variables[i].size())
      throw PreconditionError("point mass index out of range");
    flat += at[i] * strides[i];
  }
  mass[flat] = 1.0;
  return JointPmf(std::move(variables), std::move(mass));
}

JointPmf JointPmf::product(const JointPmf &p, const JointPmf &q) {
  std::vector<Alphabet> vars = p.vars_;
  vars.insert(vars.end(), q.vars_.begin(), q.vars_.end());
  std::vector<double> mass;
  mass.reserve(p.cells() * q.cells());
  for (double a : p.mass_)
    for (double b : q.mass_) mass.push_back(a * b);
  return JointPmf(std::move(vars), std::move(mass));
}

bool JointPmf::has_variable(std::string_view name) const noexcept {
  return std::any_of(vars_.begin(), vars_.end(),
                     [&](const Alphabet &a) { return a.name() == name; });
}

std::size_t JointPmf::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name() == name) return i;
  throw PreconditionError("unknown variable '" + std::string(name) + "'");
}

VarList JointPmf::names() const {
  VarList out;
  for (const auto &a : vars_) out.push_back(a.name());
  return out;
}

std::size_t JointPmf::ravel(std::span<const std::size_t> index) const {
  if (index.size() != rank()) throw PreconditionError("index has wrong rank");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= shape_[i]) throw PreconditionError("index out of range");
    flat += index[i] * strides_[i];
  }
  return flat;
}

std::vector<std::size_t> JointPmf::unravel(std::size_t flat) const {
  std::vector<std::size_t> idx(rank());
  for (std::size_t i = 0; i < rank(); ++i) {
    idx[i] = flat / strides_[i];
    flat %= strides_[i];
  }
  return idx;
}

std::size_t JointPmf::support_size() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(mass_.begin(), mass_.end(),
                    [](double m) { return m > kSupportEps; }));
}

JointPmf JointPmf::with_renamed(std::string_view from, std::string to) const {
  auto vars = vars_;
  auto &slot = vars[var_index(from)];
  slot = slot.renamed(std::move(to));
  return JointPmf(std::move(vars), mass_);
}

// ---------------------------------------------------------------------------

Channel::Channel(std::vector<Alphabet> from, Alphabet to,
                 std::vector<double> rows)
    : from_(std::move(from)), to_(std::move(to)), n_rows_(product_size(from_)),
      rows_(std::move(rows)) {
  if (rows_.size() != n_rows_ * to_.size())
    throw PreconditionError("channel to '" + to_.name() + "' has " +
                            std::to_string(rows_.size()) + " entries, expected " +
                            std::to_string(n_rows_ * to_.size()));
  for (std::size_t r = 0; r < n_rows_; ++r) {
    double total = 0.0;
    for (double v : row(r)) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw PreconditionError("channel entries must be non-negative");
      total += v;
    }
    if (total != 0.0 && std::abs(total - 1.0) > kMassTol)
      throw PreconditionError("channel row " + std::to_string(r) + " sums to " +
                              std::to_string(total));
  }
}

Channel Channel::identity(const Alphabet &from, std::string to_name) {
  const std::size_t n = from.size();
  std::vector<double> rows(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) rows[i * n + i] = 1.0;
  return Channel({from}, from.renamed(std::move(to_name)), std::move(rows));
}

Channel Channel::constant(std::vector<Alphabet> from, Alphabet to,
                          std::size_t symbol) {
  if (symbol >= to.size()) throw PreconditionError("constant symbol out of range");
  const std::size_t n = product_size(from);
  std::vector<double> rows(n * to.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) rows[r * to.size() + symbol] = 1.0;
  return Channel(std::move(from), std::move(to), std::move(rows));
}

Channel Channel::binary_symmetric(const Alphabet &from, std::string to_name,
                                  double crossover) {
  if (from.size() != 2) throw PreconditionError("BSC needs a binary alphabet");
  if (!(crossover >= 0.0 && crossover <= 1.0))
    throw PreconditionError("BSC crossover outside [0,1]");
  return Channel({from}, from.renamed(std::move(to_name)),
                 {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

Channel Channel::deterministic(std::vector<Alphabet> from, Alphabet to,
                               std::span<const std::size_t> map) {
  const std::size_t n = product_size(from);
  if (map.size() != n) throw PreconditionError("deterministic map has wrong size");
  std::vector<double> rows(n * to.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (map[r] >= to.size()) throw PreconditionError("map value out of range");
    rows[r * to.size() + map[r]] = 1.0;
  }
  return Channel(std::move(from), std::move(to), std::move(rows));
}

bool Channel::row_reachable(std::size_t r) const {
  for (double v : row(r))
    if (v > 0.0) return true;
  return false;
}

// ---------------------------------------------------------------------------

DistortionMeasure::DistortionMeasure(Alphabet source, Alphabet recon,
                                     std::vector<double> values, double dbar)
    : source_(std::move(source)), recon_(std::move(recon)),
      values_(std::move(values)), dbar_(dbar) {
  if (!(dbar_ > 0.0) || !std::isfinite(dbar_))
    throw PreconditionError("distortion bound must be finite and positive");
  if (values_.size() != source_.size() * recon_.size())
    throw PreconditionError("distortion matrix has wrong size");
  for (double v : values_)
    if (!(v >= 0.0 && v <= dbar_))
      throw PreconditionError("distortion value outside [0, dbar]");
}

DistortionMeasure DistortionMeasure::hamming(const Alphabet &source) {
  const std::size_t n = source.size();
  std::vector<double> values(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 0.0;
  return DistortionMeasure(source, source.renamed("Shat"), std::move(values),
                           1.0);
}

// ---------------------------------------------------------------------------

std::vector<double> marginal_masses(const JointPmf &p, const VarList &vars) {
  const auto idx = resolve(p, vars);
  std::vector<std::size_t> out_strides(idx.size(), 1);
  std::size_t out_size = 1;
  for (std::size_t i = idx.size(); i-- > 0;) {
    out_strides[i] = out_size;
    out_size *= p.shape()[idx[i]];
  }
  // Per-variable contribution to the output index.
  std::vector<std::size_t> weight(p.rank(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) weight[idx[i]] = out_strides[i];

  std::vector<double> out(out_size, 0.0);
  std::vector<std::size_t> counter(p.rank(), 0);
  std::size_t out_index = 0;
  const auto mass = p.mass();
  const auto &shape = p.shape();
  for (std::size_t flat = 0; flat < mass.size(); ++flat) {
    out[out_index] += mass[flat];
    for (std::size_t d = p.rank(); d-- > 0;) {
      if (++counter[d] < shape[d]) {
        out_index += weight[d];
        break;
      }
      out_index -= weight[d] * (shape[d] - 1);
      counter[d] = 0;
    }
  }
  return out;
}

JointPmf marginalize(const JointPmf &p, const VarList &keep) {
  auto masses = marginal_masses(p, keep);
  std::vector<Alphabet> vars;
  for (const auto &v : keep) vars.push_back(p.variable(v));
  return JointPmf(std::move(vars), std::move(masses));
}

JointPmf condition(const JointPmf &p, std::string_view variable,
                   std::string_view symbol) {
  const std::size_t vi = p.var_index(variable);
  const std::size_t si = p.variables()[vi].index_of(symbol);
  VarList rest;
  for (const auto &a : p.variables())
    if (a.name() != variable) rest.push_back(a.name());

  std::vector<Alphabet> vars;
  for (const auto &v : rest) vars.push_back(p.variable(v));
  std::size_t out_size = 1;
  for (const auto &a : vars) out_size *= a.size();

  std::vector<double> out;
  out.reserve(out_size);
  double total = 0.0;
  for (std::size_t flat = 0; flat < p.cells(); ++flat) {
    if ((flat / p.strides()[vi]) % p.shape()[vi] != si) continue;
    out.push_back(p[flat]);
    total += p[flat];
  }
  if (!(total > kSupportEps))
    throw DegenerateError("conditioning event " + std::string(variable) + "=" +
                          std::string(symbol) + " has zero probability");
  for (double &m : out) m /= total;
  if (rest.empty())
    throw PreconditionError("conditioning removes every variable");
  return JointPmf(std::move(vars), std::move(out));
}

JointPmf compose(const JointPmf &p, const Channel &ch,
                 const VarList &markov_through) {
  if (markov_through.size() != ch.from().size())
    throw PreconditionError("channel conditions on " +
                            std::to_string(ch.from().size()) +
                            " variables, got " +
                            std::to_string(markov_through.size()));
  const auto idx = resolve(p, markov_through);
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (!p.variables()[idx[i]].same_symbols(ch.from()[i]))
      throw PreconditionError("alphabet mismatch between channel input and '" +
                              markov_through[i] + "'");
  if (p.has_variable(ch.to().name()))
    throw PreconditionError("composed variable '" + ch.to().name() +
                            "' already present");

  std::vector<std::size_t> row_strides(idx.size(), 1);
  for (std::size_t i = idx.size(); i-- > 1;)
    row_strides[i - 1] = row_strides[i] * ch.from()[i].size();

  const std::size_t k = ch.to().size();
  std::vector<double> mass(p.cells() * k, 0.0);
  for (std::size_t flat = 0; flat < p.cells(); ++flat) {
    const double m = p[flat];
    if (m == 0.0) continue;
    std::size_t row = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
      row += ((flat / p.strides()[idx[i]]) % p.shape()[idx[i]]) * row_strides[i];
    if (m > kSupportEps && !ch.row_reachable(row))
      throw PreconditionError("channel row " + std::to_string(row) +
                              " is empty but reachable");
    for (std::size_t t = 0; t < k; ++t) mass[flat * k + t] = m * ch(row, t);
  }
  auto vars = p.variables();
  vars.push_back(ch.to());
  return JointPmf(std::move(vars), std::move(mass));
}

// ---------------------------------------------------------------------------

double entropy(const JointPmf &p, const VarList &vars) {
  if (vars.empty()) return 0.0;
  return entropy_of(marginal_masses(p, vars));
}

double conditional_entropy(const JointPmf &p, const VarList &x,
                           const VarList &given) {
  require_disjoint({&x, &given});
  const double h = entropy(p, concat(x, given)) - entropy(p, given);
  return h < 0.0 && h > -kInfoTol ? 0.0 : h;
}

double mutual_information(const JointPmf &p, const VarList &x,
                          const VarList &y) {
  return conditional_mutual_information(p, x, y, {});
}

double conditional_mutual_information(const JointPmf &p, const VarList &x,
                                      const VarList &y, const VarList &z) {
  require_disjoint({&x, &y, &z});
  const double i = entropy(p, concat(x, z)) + entropy(p, concat(y, z)) -
                   entropy(p, concat(concat(x, y), z)) - entropy(p, z);
  if (i < 0.0) {
    if (i < -kInfoTol)
      throw std::logic_error("conditional mutual information evaluated to " +
                             std::to_string(i));
    return 0.0;
  }
  return i;
}

bool check_markov(const JointPmf &p, const VarList &x, const VarList &y,
                  const VarList &z, double tol) {
  return conditional_mutual_information(p, x, z, y) <= tol;
}

double min_positive_mass(const JointPmf &p, const MassPattern &pattern) {
  if (pattern.of.empty()) throw PreconditionError("empty mass pattern");
  require_disjoint({&pattern.of, &pattern.given});
  double best = std::numeric_limits<double>::infinity();
  if (pattern.given.empty()) {
    for (double m : marginal_masses(p, pattern.of))
      if (m > kSupportEps) best = std::min(best, m);
  } else {
    const auto joint = marginal_masses(p, concat(pattern.given, pattern.of));
    const auto cond = marginal_masses(p, pattern.given);
    const std::size_t inner = joint.size() / cond.size();
    for (std::size_t g = 0; g < cond.size(); ++g)
      for (std::size_t o = 0; o < inner; ++o) {
        const double m = joint[g * inner + o];
        if (m > kSupportEps) best = std::min(best, m / cond[g]);
      }
  }
  if (!std::isfinite(best)) throw DegenerateError("empty support");
  return best;
}

double variational_distance(const JointPmf &p, const JointPmf &q) {
  require_same_layout(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.cells(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

double kl_divergence_nats(const JointPmf &p, const JointPmf &q) {
  require_same_layout(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.cells(); ++i) {
    if (p[i] <= 0.0) continue;
    if (!(q[i] > 0.0))
      throw PreconditionError("KL divergence undefined: support(p) not in "
                              "support(q)");
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

double kl_divergence(const JointPmf &p, const JointPmf &q) {
  return kl_divergence_nats(p, q) / std::log(2.0);
}

bool support_product_check(const JointPmf &p, const VarList &left,
                           const VarList &right) {
  require_disjoint({&left, &right});
  if (left.size() + right.size() != p.rank())
    throw PreconditionError("left and right must cover every variable");
  const auto joint = marginal_masses(p, concat(left, right));
  const auto l = marginal_masses(p, left);
  const auto r = marginal_masses(p, right);
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) {
      const bool both = l[i] > kSupportEps && r[j] > kSupportEps;
      const bool joint_pos = joint[i * r.size() + j] > kSupportEps;
      if (both != joint_pos) return false;
    }
  return true;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw PreconditionError("binary entropy argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double binary_convolution(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
    throw PreconditionError("binary convolution argument outside [0,1]");
  return x * (1.0 - y) + y * (1.0 - x);
}

} // namespace crr
