#include "crr/source.hpp"

#include <cmath>
#include <limits>

#include "crr/errors.hpp"

namespace crr {

SourceSpec::SourceSpec(JointPmf pmf, DistortionMeasure distortion,
                       double target)
    : pmf_(std::move(pmf)), distortion_(std::move(distortion)),
      target_(target) {
  if (pmf_.rank() != 3 || !pmf_.has_variable("S") || !pmf_.has_variable("U") ||
      !pmf_.has_variable("V"))
    throw PreconditionError("source pmf must be over exactly S, U, V");
  if (!distortion_.source().same_symbols(pmf_.variable("S")))
    throw PreconditionError("distortion source alphabet differs from S");
  if (!(target_ >= 0.0) || !std::isfinite(target_))
    throw PreconditionError("target distortion must be finite and >= 0");
}

SourceSpec SourceSpec::with_target(double target) const {
  return SourceSpec(pmf_, distortion_, target);
}

JointPmf binary_family_pmf(double rho, double delta) {
  if (!(rho >= 0.0 && rho <= 1.0) || !(delta >= 0.0 && delta <= 1.0))
    throw PreconditionError("crossover probabilities must lie in [0,1]");
  std::vector<double> mass(8);
  for (int s = 0; s < 2; ++s)
    for (int u = 0; u < 2; ++u)
      for (int v = 0; v < 2; ++v)
        mass[s * 4 + u * 2 + v] = 0.5 * (u != s ? rho : 1.0 - rho) *
                                  (v != u ? delta : 1.0 - delta);
  return JointPmf({Alphabet::range("S", 2), Alphabet::range("U", 2),
                   Alphabet::range("V", 2)},
                  std::move(mass));
}

SourceSpec binary_family_source(double rho, double delta, double target) {
  auto pmf = binary_family_pmf(rho, delta);
  auto d = DistortionMeasure::hamming(pmf.variable("S"));
  return SourceSpec(std::move(pmf), std::move(d), target);
}

std::vector<std::size_t> bayes_symbol_map(const DistortionMeasure &d) {
  std::vector<std::size_t> map(d.source().size(), 0);
  for (std::size_t s = 0; s < d.source().size(); ++s)
    for (std::size_t t = 1; t < d.recon().size(); ++t)
      if (d(s, t) < d(s, map[s])) map[s] = t;
  return map;
}

double underline_distortion(const SourceSpec &src) {
  const auto ps = marginal_masses(src.pmf(), {"S"});
  const auto map = bayes_symbol_map(src.distortion());
  double total = 0.0;
  for (std::size_t s = 0; s < ps.size(); ++s)
    total += ps[s] * src.distortion()(s, map[s]);
  return total;
}

AuxAlphabetBounds aux_alphabet_bounds(std::size_t size_s, std::size_t size_shat,
                                      std::size_t size_u) {
  if (size_s == 0 || size_shat == 0 || size_u == 0)
    throw PreconditionError("alphabet sizes must be positive");
  std::size_t power = 1;
  for (std::size_t i = 0; i < size_u; ++i) {
    if (power > std::numeric_limits<std::size_t>::max() / size_shat)
      throw PreconditionError("alphabet bound overflows");
    power *= size_shat;
  }
  return {size_s + 2, size_s * (size_s + 6) * power + 4,
          size_s * (size_s + 4) * power + 1};
}

} // namespace crr
