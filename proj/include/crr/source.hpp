#pragma once

#include <cstddef>

#include "crr/probability.hpp"

namespace crr {

/// A source (S, U, V) ~ p with a distortion measure and a target distortion.
/// The pmf must contain variables named "S", "U" and "V" (any order).
class SourceSpec {
public:
  SourceSpec(JointPmf pmf, DistortionMeasure distortion, double target);

  const JointPmf &pmf() const noexcept { return pmf_; }
  const DistortionMeasure &distortion() const noexcept { return distortion_; }
  double target() const noexcept { return target_; }
  const Alphabet &source_alphabet() const { return pmf_.variable("S"); }

  /// Same source, different target distortion.
  SourceSpec with_target(double target) const;

private:
  JointPmf pmf_;
  DistortionMeasure distortion_;
  double target_;
};

/// Doubly symmetric binary family: S uniform, U = S through BSC(rho),
/// V = U through BSC(delta), so S - U - V.
JointPmf binary_family_pmf(double rho, double delta);

/// binary_family_pmf with Hamming distortion.
SourceSpec binary_family_source(double rho, double delta, double target);

/// min over maps phi: S -> S_hat of E d(S, phi(S)).
double underline_distortion(const SourceSpec &src);

/// Per-symbol minimizer of d(s, .), ties to the smallest index.
std::vector<std::size_t> bayes_symbol_map(const DistortionMeasure &d);

struct AuxAlphabetBounds {
  std::size_t star;
  std::size_t ddag;
  std::size_t dag;
};

/// Auxiliary alphabet sizes beyond which the single-auxiliary, outer and
/// three-auxiliary inner regions stop growing.
AuxAlphabetBounds aux_alphabet_bounds(std::size_t size_s, std::size_t size_shat,
                                      std::size_t size_u);

} // namespace crr
