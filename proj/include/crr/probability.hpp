#pragma once

// Finite-alphabet probability engine: named alphabets, dense joint pmfs,
// channels, distortion matrices and the Shannon measures used by the rate
// formulas. All information quantities are in bits.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crr {

/// Entries at or below this value are treated as outside the support.
inline constexpr double kSupportEps = 1e-15;
/// Tolerance on total mass and on channel row sums.
inline constexpr double kMassTol = 1e-12;
/// Tolerance on information quantities (clamping, Markov tests, equivalence).
inline constexpr double kInfoTol = 1e-9;

using VarList = std::vector<std::string>;

class Alphabet {
public:
  Alphabet(std::string name, std::vector<std::string> symbols);

  /// Alphabet with symbols "0", "1", ..., "n-1".
  static Alphabet range(std::string name, std::size_t n);

  const std::string &name() const noexcept { return name_; }
  const std::vector<std::string> &symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string &symbol(std::size_t i) const { return symbols_.at(i); }
  std::size_t index_of(std::string_view symbol) const;

  Alphabet renamed(std::string name) const;
  bool same_symbols(const Alphabet &other) const noexcept {
    return symbols_ == other.symbols_;
  }
  bool operator==(const Alphabet &) const = default;

private:
  std::string name_;
  std::vector<std::string> symbols_;
};

/// Dense probability tensor over an ordered list of named alphabets.
/// Row-major layout: the last variable varies fastest.
class JointPmf {
public:
  JointPmf(std::vector<Alphabet> variables, std::vector<double> mass);

  static JointPmf uniform(std::vector<Alphabet> variables);
  static JointPmf point_mass(std::vector<Alphabet> variables,
                             std::span<const std::size_t> at);
  /// Independent product p(x)q(y); variable names must be disjoint.
  static JointPmf product(const JointPmf &p, const JointPmf &q);

  const std::vector<Alphabet> &variables() const noexcept { return vars_; }
  std::span<const double> mass() const noexcept { return mass_; }
  std::size_t rank() const noexcept { return vars_.size(); }
  std::size_t cells() const noexcept { return mass_.size(); }
  const std::vector<std::size_t> &shape() const noexcept { return shape_; }
  const std::vector<std::size_t> &strides() const noexcept { return strides_; }

  bool has_variable(std::string_view name) const noexcept;
  std::size_t var_index(std::string_view name) const;
  const Alphabet &variable(std::string_view name) const {
    return vars_[var_index(name)];
  }
  VarList names() const;

  std::size_t ravel(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unravel(std::size_t flat) const;
  double operator[](std::size_t flat) const { return mass_[flat]; }
  double at(std::span<const std::size_t> index) const {
    return mass_[ravel(index)];
  }
  bool positive(std::size_t flat) const noexcept {
    return mass_[flat] > kSupportEps;
  }
  std::size_t support_size() const noexcept;

  /// Copy with one variable renamed.
  JointPmf with_renamed(std::string_view from, std::string to) const;

private:
  std::vector<Alphabet> vars_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::vector<double> mass_;
};

/// Conditional pmf of `to` given the product of the `from` alphabets.
/// Rows are indexed by the row-major flat index of the conditioning tuple.
/// A row may be all-zero (unreachable conditioning symbol); otherwise it sums
/// to one.
class Channel {
public:
  Channel(std::vector<Alphabet> from, Alphabet to, std::vector<double> rows);

  static Channel identity(const Alphabet &from, std::string to_name);
  static Channel constant(std::vector<Alphabet> from, Alphabet to,
                          std::size_t symbol);
  static Channel binary_symmetric(const Alphabet &from, std::string to_name,
                                  double crossover);
  /// Deterministic channel y = map[x] over the product of `from`.
  static Channel deterministic(std::vector<Alphabet> from, Alphabet to,
                               std::span<const std::size_t> map);

  const std::vector<Alphabet> &from() const noexcept { return from_; }
  const Alphabet &to() const noexcept { return to_; }
  std::size_t rows() const noexcept { return n_rows_; }
  double operator()(std::size_t row, std::size_t symbol) const {
    return rows_[row * to_.size() + symbol];
  }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(rows_).subspan(r * to_.size(), to_.size());
  }
  std::span<const double> data() const noexcept { return rows_; }
  bool row_reachable(std::size_t r) const;

private:
  std::vector<Alphabet> from_;
  Alphabet to_;
  std::size_t n_rows_;
  std::vector<double> rows_;
};

/// Bounded per-letter distortion d(s, s_hat) in [0, dbar].
class DistortionMeasure {
public:
  DistortionMeasure(Alphabet source, Alphabet recon, std::vector<double> values,
                    double dbar);

  /// Hamming distortion on `source` with a copy of it (named `Shat`) as the
  /// reconstruction alphabet; dbar = 1.
  static DistortionMeasure hamming(const Alphabet &source);

  const Alphabet &source() const noexcept { return source_; }
  const Alphabet &recon() const noexcept { return recon_; }
  double dbar() const noexcept { return dbar_; }
  double operator()(std::size_t s, std::size_t s_hat) const {
    return values_[s * recon_.size() + s_hat];
  }

private:
  Alphabet source_;
  Alphabet recon_;
  std::vector<double> values_;
  double dbar_;
};

// ---------------------------------------------------------------------------
// Marginals and transforms

/// Marginal over `keep`, with the variables in the order given.
JointPmf marginalize(const JointPmf &p, const VarList &keep);
/// Conditional pmf of the remaining variables given variable == symbol.
JointPmf condition(const JointPmf &p, std::string_view variable,
                   std::string_view symbol);
/// Appends ch.to() as a new variable drawn from ch given `markov_through`,
/// so the new variable is conditionally independent of the rest.
JointPmf compose(const JointPmf &p, const Channel &ch,
                 const VarList &markov_through);

/// Masses of the marginal on `vars` as a flat row-major vector.
std::vector<double> marginal_masses(const JointPmf &p, const VarList &vars);

// ---------------------------------------------------------------------------
// Information measures (bits)

double entropy(const JointPmf &p, const VarList &vars);
double conditional_entropy(const JointPmf &p, const VarList &x,
                           const VarList &given);
double mutual_information(const JointPmf &p, const VarList &x,
                          const VarList &y);
/// I(X;Y|Z); small negative round-off is clamped to zero.
double conditional_mutual_information(const JointPmf &p, const VarList &x,
                                      const VarList &y, const VarList &z);
/// True iff I(X;Z|Y) <= tol, i.e. X - Y - Z.
bool check_markov(const JointPmf &p, const VarList &x, const VarList &y,
                  const VarList &z, double tol = kInfoTol);

/// Minimum positive mass of the marginal on `of`, or of the conditional
/// p(of | given) over supp(of, given) when `given` is non-empty.
struct MassPattern {
  VarList of;
  VarList given{};
};
double min_positive_mass(const JointPmf &p, const MassPattern &pattern);

double variational_distance(const JointPmf &p, const JointPmf &q);
/// D(p || q) in bits. Throws if supp(p) is not inside supp(q).
double kl_divergence(const JointPmf &p, const JointPmf &q);
/// Same divergence in nats.
double kl_divergence_nats(const JointPmf &p, const JointPmf &q);

/// True iff supp(left, right) = supp(left) x supp(right).
bool support_product_check(const JointPmf &p, const VarList &left,
                           const VarList &right);

double binary_entropy(double x);
double binary_convolution(double x, double y);

} // namespace crr
