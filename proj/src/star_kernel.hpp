#pragma once

// Flat-array evaluation of a single-auxiliary channel q(a|s) against a fixed
// source, used in the optimizer's inner loop. Results agree with the JointPmf
// route of eval_star_candidate up to float round-off.

#include <cstddef>
#include <span>
#include <vector>

#include "crr/source.hpp"

namespace crr::detail {

struct KernelEval {
  double a = 0.0;
  double b = 0.0;
  double distortion = 0.0;
};

class StarKernel {
public:
  enum class Mode {
    /// Reconstruct per common-randomness class of (A,U) and (A,V).
    kCommon,
    /// A is the reconstruction itself: distortion E d(S, A).
    kDirect,
  };

  StarKernel(const SourceSpec &src, std::size_t k, Mode mode);

  std::size_t sources() const noexcept { return ns_; }
  std::size_t aux() const noexcept { return k_; }
  Mode mode() const noexcept { return mode_; }
  double source_mass(std::size_t s) const { return ps_[s]; }
  double cost(std::size_t s, std::size_t t) const { return d_[s * nt_ + t]; }

  /// q is row-major |S| x k. Not thread-safe: uses internal scratch.
  KernelEval evaluate(std::span<const double> q);

private:
  double rate_term(std::span<const double> q, const std::vector<double> &pside,
                   std::size_t nside, double h_a_given_s);
  double common_distortion(std::span<const double> q);

  std::size_t ns_, nu_, nv_, nt_, k_;
  Mode mode_;
  std::vector<double> psuv_; // s, u, v
  std::vector<double> psu_;  // s, u
  std::vector<double> psv_;  // s, v
  std::vector<double> ps_;
  std::vector<double> d_;
  std::vector<double> scratch_joint_;
  std::vector<double> scratch_class_;
  std::vector<std::size_t> parent_;
};

} // namespace crr::detail
