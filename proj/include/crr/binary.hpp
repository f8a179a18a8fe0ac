#pragma once

// Closed-form region of the doubly symmetric binary source with Hamming
// distortion, and the discontinuity of the region at delta = 0 and 1.

#include <vector>

#include "crr/frontier.hpp"

namespace crr {

/// Single corner (h(rho*D) - h(D), h((rho*delta)*D) - h(D)) for D < 1/2,
/// (0, 0) for D >= 1/2. Requires 0 < rho, delta < 1.
RegionFrontier binary_region(double rho, double delta, double D);

struct DemoRow {
  double delta = 0.0;
  RateCorner corner;
  /// corner.a minus the r_uv bound of the degenerate source's corner.
  double gap = 0.0;
  /// |corner.b - limit.b|.
  double limit_error = 0.0;
};

struct DemoReport {
  double rho = 0.0;
  double D = 0.0;
  /// delta -> 0 side.
  std::vector<DemoRow> rows;
  /// delta -> 1 side, evaluated at 1 - delta for each input delta.
  std::vector<DemoRow> mirror_rows;
  /// Limit of the closed-form corner as delta -> 0 (and 1).
  RateCorner limit;
  /// Corner of the degenerate source (V = U, resp. V = 1 - U), found by a
  /// constant auxiliary whose common randomness is U itself.
  RateCorner zero_corner;
  RateCorner one_corner;
  double zero_distortion = 0.0;
  double one_distortion = 0.0;
  /// limit.a - zero_corner.a.
  double gap = 0.0;
  bool gap_positive = false;
  /// Gaps constant across the list and limit errors shrinking with delta.
  bool monotone_stable = false;
};

/// Requires 0 < rho < D < 1/2 and every delta in (0, 1).
DemoReport discontinuity_demo(double rho, double D,
                              const std::vector<double> &deltas);

} // namespace crr
