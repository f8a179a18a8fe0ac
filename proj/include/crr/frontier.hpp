#pragma once

#include <cstddef>
#include <vector>

#include "crr/candidates.hpp"

namespace crr {

/// Corners closer than this in the sum-rate coordinate are merged.
inline constexpr double kCornerDedup = 1e-6;

struct FrontierPoint {
  RateCorner corner;
  /// Channel rows q(a|s), row-major |S| x k, that produced the corner.
  std::vector<double> witness;
};

/// Finite union-of-quadrants region {r_uv >= a, r_uv + r_v >= b}.
struct RegionFrontier {
  double D = 0.0;
  /// Set when D is below the minimum achievable distortion.
  bool infeasible = false;
  double d_min = 0.0;
  /// Auxiliary alphabet size of the witnesses.
  std::size_t aux_size = 0;
  /// Pareto corners sorted by `a` ascending (hence `b` descending).
  std::vector<FrontierPoint> points;

  std::vector<RateCorner> corners() const;
};

/// Sorts by (a, b) and keeps a point only if its b is below every b kept so
/// far by more than kCornerDedup.
void pareto_reduce(std::vector<FrontierPoint> &points);

/// min over corners of lambda * a + (1 - lambda) * b.
double support_value(const RegionFrontier &f, double lambda);

/// True if region(outer) contains region(inner) up to `tol` in every support
/// direction of the sweep {0, 0.05, ..., 1}.
bool frontier_contains(const RegionFrontier &outer, const RegionFrontier &inner,
                       double tol);

/// Whether some corner of `f` is within `tol` (per coordinate) of `c` or
/// dominates it.
bool frontier_achieves(const RegionFrontier &f, const RateCorner &c, double tol);

} // namespace crr
