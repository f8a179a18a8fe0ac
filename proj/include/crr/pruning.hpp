#pragma once

// Pruning of low-probability auxiliary configurations in a Markov chain
// (A1,A2) - S - (B1,B2), with the quantitative guarantees of each method
// recomputed as checks, and the agreement bound for two independent guesses.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "crr/probability.hpp"

namespace crr {

/// Joint pmf over variables named A1, A2, S, B1, B2 (stored in that order)
/// with (A1,A2) - S - (B1,B2) and every symbol of S in the support.
class MarkovFiveTuple {
public:
  explicit MarkovFiveTuple(const JointPmf &joint, double tol = kInfoTol);

  const JointPmf &joint() const noexcept { return joint_; }
  std::size_t size_a1() const { return joint_.shape()[0]; }
  std::size_t size_a2() const { return joint_.shape()[1]; }
  std::size_t size_s() const { return joint_.shape()[2]; }
  std::size_t size_b() const { return joint_.shape()[3] * joint_.shape()[4]; }

private:
  JointPmf joint_;
};

struct PruneCheck {
  std::string name;
  double achieved = 0.0;
  double bound = 0.0;
  bool holds = false;
};

struct PruneReport {
  char method = 'a';
  double delta = 0.0;
  double eta = 0.0;
  double m_s = 0.0;
  std::size_t size_s = 0;
  double l1 = 0.0;
  double kl_nats = 0.0;
  /// |H(S|A1~ B1) - H(S|A1 B1)| and |H(S|A1~ A2~ B1 B2) - H(S|A1 A2 B1 B2)|.
  double dh_single = 0.0;
  double dh_pair = 0.0;
  /// Method A: worst conditional inflation of singleton (b1,b2) events.
  double inflation = 0.0;
  /// Method B: number of (pair, event) cases under the zeroing hypothesis.
  std::size_t zeroing_cases = 0;
  /// Xi at delta with m_{S B1 B2} in place of m_{SUV}; NaN off its domain.
  double xi_at_delta = 0.0;
  std::vector<PruneCheck> checks;

  bool all_hold() const;
};

struct PruneResult {
  MarkovFiveTuple pruned;
  PruneReport report;
};

/// Keeps the pairs (a1,a2) flagged in `keep` (row-major |A1| x |A2|) and
/// renormalizes per s. Requires eta in (0, ln 2) and
/// 1 - Pr[E] <= m_S (1 - e^{-eta}).
PruneResult prune_a(const MarkovFiveTuple &t, const std::vector<bool> &keep,
                    double eta);

/// Keeps the edges (a1,a2,s) with p(s|a1,a2) > delta and renormalizes per s.
/// Requires eta in (0, 1) and 0 <= delta <= m_S (1 - e^{-eta}). `events` are
/// extra subsets of B1 x B2 (row-major) for the zeroing check; all singletons
/// are always checked.
PruneResult prune_b(const MarkovFiveTuple &t, double delta, double eta,
                    const std::vector<std::vector<bool>> &events = {});

/// {(a1,a2): Pr[mismatch | a1,a2] <= threshold}, pairs of zero mass included.
using MismatchPredicate = std::function<bool(
    std::size_t a1, std::size_t a2, std::size_t s, std::size_t b1, std::size_t b2)>;
std::vector<bool> event_from_mismatch(const MarkovFiveTuple &t,
                                      const MismatchPredicate &mismatch,
                                      double threshold);

/// Xi(x) = (|S| x / (m - |S| x)) log2(|S|^2 (m - |S| x) / x) on [0, m / |S|),
/// with Xi(0) = 0.
double xi_function(std::size_t size_s, double m, double x);

/// Shared entropy-difference bound of properties (d) and (e) with
/// multiplier c on the (e^eta - 1) log|S| term, in bits. Zero when |S| = 1.
double entropy_delta_bound(double eta, std::size_t size_s, double c);

struct AgreementResult {
  std::size_t z_star = 0;
  double bound = 0.0;
  double mismatch = 0.0;
  double prob_f = 0.0;
  double prob_g = 0.0;
};

/// X ~ px and Y ~ py independent, f and g map symbol indices to {0..nz-1}.
/// Requires Pr[f(X) != g(Y)] < 1/25.
AgreementResult agreement_point(const std::vector<double> &px,
                                const std::vector<double> &py,
                                const std::vector<std::size_t> &f,
                                const std::vector<std::size_t> &g,
                                std::size_t nz);

} // namespace crr
