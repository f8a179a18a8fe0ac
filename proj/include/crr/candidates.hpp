#pragma once

// Evaluation of auxiliary test channels: rate corners, common-randomness
// reconstructions and achieved distortion.

#include <optional>
#include <vector>

#include "crr/gacs_korner.hpp"
#include "crr/probability.hpp"
#include "crr/source.hpp"

namespace crr {

/// Slack on the distortion constraint E d <= D for float round-off.
inline constexpr double kDistortionTol = 1e-12;

/// Quadrant anchor {r_uv >= a, r_uv + r_v >= b}, in bits per source symbol.
struct RateCorner {
  double a = 0.0;
  double b = 0.0;
};

struct AuxCandidate {
  /// A | S.
  Channel q_a;
  /// B | (A,S) and C | (A,S) for three-auxiliary candidates.
  std::optional<Channel> q_b;
  std::optional<Channel> q_c;
  /// Common randomness between the two receivers' views: (A,U) and (A,V), or
  /// (A,B,U) and (A,C,V).
  GKPartition partition;
  /// Reconstruction symbol per class, parallel to partition.class_ids.
  std::vector<std::size_t> recon;
  double achieved_distortion = 0.0;
  RateCorner corner;

  bool feasible_at(double target) const {
    return achieved_distortion <= target + kDistortionTol;
  }
};

/// Builds q_{ASUV} from q_{A|S}, reconstructs per common-randomness class with
/// the Bayes symbol (ties to the smallest index) and reports the corner
/// (I(S;A|U), I(S;A|V)).
AuxCandidate eval_star_candidate(const SourceSpec &src, const Channel &q_a);

/// E d(S, recon(class)) recomputed from the candidate's channels.
double candidate_distortion(const SourceSpec &src, const AuxCandidate &c);

/// Joint pmf over (S, U, V, A[, B, C]) of a candidate.
JointPmf candidate_joint(const SourceSpec &src, const AuxCandidate &c);

struct TripleEvaluation {
  /// (I(S;A,B|U), I(S;B|A,C,U,V) + I(S;A,C|V)).
  RateCorner ddag;
  /// (I(S;A,B|U), max{I(S;A|U), I(S;A|V)} + I(S;B|A,U) + I(S;C|A,V)).
  RateCorner dag;
  AuxCandidate candidate;
  /// Achieved distortion within the target.
  bool feasible = false;
};

/// Three auxiliaries A|S, B|(A,S), C|(A,S). Composing B and C separately from
/// (A,S) makes B - (A,S) - C hold by construction.
TripleEvaluation eval_triple_candidate(const SourceSpec &src, const Channel &q_a,
                                       const Channel &q_b, const Channel &q_c);

/// Time-sharing of two single-auxiliary candidates: the auxiliary alphabet is
/// the disjoint union, with weight `lambda` on the first, and the
/// reconstruction is the case split of the two candidates' maps.
AuxCandidate time_share(const SourceSpec &src, const AuxCandidate &first,
                        const AuxCandidate &second, double lambda);

/// Identity lift X -> copy of X conditioned on (A,S): used to set B = A or
/// C = A in a triple.
Channel lift_copy_of_a(const Alphabet &a, const Alphabet &s, std::string name);

} // namespace crr
