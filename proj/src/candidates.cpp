#include "crr/candidates.hpp"

#include <algorithm>

#include "crr/errors.hpp"

namespace crr {

namespace {

Channel renamed_output(const Channel &ch, std::string name) {
  return Channel(ch.from(), ch.to().renamed(std::move(name)),
                 std::vector<double>(ch.data().begin(), ch.data().end()));
}

void require_source_channel(const SourceSpec &src, const Channel &q_a) {
  if (q_a.from().size() != 1 ||
      !q_a.from()[0].same_symbols(src.source_alphabet()))
    throw PreconditionError("auxiliary channel must condition on S");
}

void require_as_channel(const Channel &q_a, const SourceSpec &src,
                        const Channel &ch, const char *what) {
  if (ch.from().size() != 2 || !ch.from()[0].same_symbols(q_a.to()) ||
      !ch.from()[1].same_symbols(src.source_alphabet()))
    throw PreconditionError(std::string(what) + " must condition on (A, S)");
}

/// Joint over (S, U, V, A[, B, C]) with fixed variable names.
JointPmf build_joint(const SourceSpec &src, const Channel &q_a,
                     const Channel *q_b, const Channel *q_c) {
  JointPmf joint = compose(src.pmf(), renamed_output(q_a, "A"), {"S"});
  if (q_b) joint = compose(joint, renamed_output(*q_b, "B"), {"A", "S"});
  if (q_c) joint = compose(joint, renamed_output(*q_c, "C"), {"A", "S"});
  return joint;
}

/// GK partition between (A[,B],U) and (A'[,C],V) where A' duplicates A.
GKPartition common_partition(const JointPmf &joint, bool triple) {
  VarList keep = triple ? VarList{"A", "B", "C", "U", "V"}
                        : VarList{"A", "U", "V"};
  JointPmf view = marginalize(joint, keep);
  view = compose(view, Channel::identity(view.variable("A"), "A'"), {"A"});
  if (triple) return gk_partition(view, {"A", "B", "U"}, {"A'", "C", "V"});
  return gk_partition(view, {"A", "U"}, {"A'", "V"});
}

/// Masses of (class slot, s) with the class read from the partition's left
/// variables.
std::vector<double> class_source_masses(const JointPmf &joint,
                                        const GKPartition &part) {
  const JointPmf ext = with_gk(joint, part, "#GK");
  return marginal_masses(ext, {"#GK", "S"});
}

std::size_t global_bayes_symbol(const SourceSpec &src) {
  const auto ps = marginal_masses(src.pmf(), {"S"});
  const auto &d = src.distortion();
  std::size_t best = 0;
  double best_cost = 0.0;
  for (std::size_t t = 0; t < d.recon().size(); ++t) {
    double cost = 0.0;
    for (std::size_t s = 0; s < ps.size(); ++s) cost += ps[s] * d(s, t);
    if (t == 0 || cost < best_cost) {
      best = t;
      best_cost = cost;
    }
  }
  return best;
}

std::vector<std::size_t> bayes_recon(const SourceSpec &src,
                                     const std::vector<double> &cs,
                                     std::size_t classes) {
  const auto &d = src.distortion();
  const std::size_t ns = d.source().size();
  const std::size_t fallback = global_bayes_symbol(src);
  std::vector<std::size_t> recon(classes, fallback);
  for (std::size_t c = 0; c < classes; ++c) {
    double mass = 0.0;
    for (std::size_t s = 0; s < ns; ++s) mass += cs[c * ns + s];
    if (!(mass > kSupportEps)) continue;
    double best_cost = 0.0;
    for (std::size_t t = 0; t < d.recon().size(); ++t) {
      double cost = 0.0;
      for (std::size_t s = 0; s < ns; ++s) cost += cs[c * ns + s] * d(s, t);
      if (t == 0 || cost < best_cost) {
        recon[c] = t;
        best_cost = cost;
      }
    }
  }
  return recon;
}

double expected_distortion(const SourceSpec &src, const std::vector<double> &cs,
                           const std::vector<std::size_t> &recon) {
  const auto &d = src.distortion();
  const std::size_t ns = d.source().size();
  double total = 0.0;
  for (std::size_t c = 0; c < recon.size(); ++c)
    for (std::size_t s = 0; s < ns; ++s)
      total += cs[c * ns + s] * d(s, recon[c]);
  return total;
}

RateCorner star_corner(const JointPmf &joint) {
  return {conditional_mutual_information(joint, {"S"}, {"A"}, {"U"}),
          conditional_mutual_information(joint, {"S"}, {"A"}, {"V"})};
}

} // namespace

JointPmf candidate_joint(const SourceSpec &src, const AuxCandidate &c) {
  return build_joint(src, c.q_a, c.q_b ? &*c.q_b : nullptr,
                     c.q_c ? &*c.q_c : nullptr);
}

AuxCandidate eval_star_candidate(const SourceSpec &src, const Channel &q_a) {
  require_source_channel(src, q_a);
  const JointPmf joint = build_joint(src, q_a, nullptr, nullptr);
  AuxCandidate out{q_a, std::nullopt, std::nullopt,
                   common_partition(joint, false), {}, 0.0, {}};
  const auto cs = class_source_masses(joint, out.partition);
  out.recon = bayes_recon(src, cs, out.partition.class_count());
  out.achieved_distortion = expected_distortion(src, cs, out.recon);
  out.corner = star_corner(joint);
  return out;
}

double candidate_distortion(const SourceSpec &src, const AuxCandidate &c) {
  const JointPmf joint = candidate_joint(src, c);
  return expected_distortion(src, class_source_masses(joint, c.partition),
                             c.recon);
}

TripleEvaluation eval_triple_candidate(const SourceSpec &src, const Channel &q_a,
                                       const Channel &q_b, const Channel &q_c) {
  require_source_channel(src, q_a);
  require_as_channel(q_a, src, q_b, "B channel");
  require_as_channel(q_a, src, q_c, "C channel");
  const JointPmf joint = build_joint(src, q_a, &q_b, &q_c);

  GKPartition part = common_partition(joint, true);
  const auto cs = class_source_masses(joint, part);
  auto recon = bayes_recon(src, cs, part.class_count());
  const double dist = expected_distortion(src, cs, recon);

  const double a_ab_u =
      conditional_mutual_information(joint, {"S"}, {"A", "B"}, {"U"});
  const RateCorner ddag{
      a_ab_u,
      conditional_mutual_information(joint, {"S"}, {"B"}, {"A", "C", "U", "V"}) +
          conditional_mutual_information(joint, {"S"}, {"A", "C"}, {"V"})};
  const RateCorner star = star_corner(joint);
  const RateCorner dag{
      a_ab_u,
      std::max(star.a, star.b) +
          conditional_mutual_information(joint, {"S"}, {"B"}, {"A", "U"}) +
          conditional_mutual_information(joint, {"S"}, {"C"}, {"A", "V"})};
  AuxCandidate cand{q_a, q_b, q_c, std::move(part), std::move(recon), dist, ddag};
  const bool feasible = cand.feasible_at(src.target());
  return {ddag, dag, std::move(cand), feasible};
}

AuxCandidate time_share(const SourceSpec &src, const AuxCandidate &first,
                        const AuxCandidate &second, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw PreconditionError("time-sharing weight must lie in [0,1]");
  if (first.q_b || second.q_b)
    throw PreconditionError("time-sharing needs single-auxiliary candidates");
  require_source_channel(src, first.q_a);
  require_source_channel(src, second.q_a);

  const Alphabet &a1 = first.q_a.to();
  const Alphabet &a2 = second.q_a.to();
  std::vector<std::string> symbols;
  for (const auto &s : a1.symbols()) symbols.push_back("0:" + s);
  for (const auto &s : a2.symbols()) symbols.push_back("1:" + s);
  const std::size_t k1 = a1.size(), k = symbols.size();
  const std::size_t ns = src.source_alphabet().size();
  std::vector<double> rows(ns * k, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t t = 0; t < k1; ++t)
      rows[s * k + t] = lambda * first.q_a(s, t);
    for (std::size_t t = 0; t < a2.size(); ++t)
      rows[s * k + k1 + t] = (1.0 - lambda) * second.q_a(s, t);
  }
  Channel q({src.source_alphabet()}, Alphabet("A", std::move(symbols)),
            std::move(rows));

  const JointPmf joint = build_joint(src, q, nullptr, nullptr);
  AuxCandidate out{q, std::nullopt, std::nullopt,
                   common_partition(joint, false), {}, 0.0, {}};
  const std::size_t nv = src.pmf().variable("V").size();
  const std::size_t fallback = global_bayes_symbol(src);
  out.recon.assign(out.partition.class_count(), fallback);
  for (std::size_t i = 0; i < out.partition.class_count(); ++i) {
    const std::size_t id = out.partition.class_ids[i];
    const std::size_t at = id / nv, v = id % nv;
    const AuxCandidate &src_cand = at < k1 ? first : second;
    const std::size_t local = (at < k1 ? at : at - k1) * nv + v;
    const std::size_t c = src_cand.partition.class_of_right[local];
    if (c != GKPartition::kUnsupported)
      out.recon[i] = src_cand.recon[src_cand.partition.class_index(c)];
  }
  out.achieved_distortion = expected_distortion(
      src, class_source_masses(joint, out.partition), out.recon);
  out.corner = star_corner(joint);
  return out;
}

Channel lift_copy_of_a(const Alphabet &a, const Alphabet &s, std::string name) {
  std::vector<std::size_t> map(a.size() * s.size());
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i / s.size();
  return Channel::deterministic({a, s}, a.renamed(std::move(name)), map);
}

} // namespace crr
