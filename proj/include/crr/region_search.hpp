#pragma once

// Inner approximation of the single-auxiliary region and of the
// quantize-and-bin region by grid enumeration and seeded multi-start descent.

#include <cstddef>
#include <cstdint>

#include "crr/frontier.hpp"
#include "crr/source.hpp"

namespace crr {

struct SearchConfig {
  /// Simplex grid step for enumeration, and the initial descent step.
  double grid = 0.05;
  int restarts = 64;
  std::uint64_t seed = 42;
  /// Worker threads for restarts; results do not depend on this.
  unsigned threads = 1;
  /// Enumerate exhaustively when |S| * k <= this many channel cells ...
  std::size_t exhaustive_cells = 8;
  /// ... and the grid has at most this many points.
  std::size_t exhaustive_budget = 4000000;
};

/// Scalarization weights {0, 0.05, ..., 1}.
const std::vector<double> &lambda_sweep();

/// Frontier of (I(S;A|U), I(S;A|V)) over channels q(a|s) with |A| = k whose
/// common-randomness reconstruction meets the target. k = 0 selects |S| + 2.
/// D below the minimum achievable distortion yields an infeasible frontier.
RegionFrontier optimize_star_region(const SourceSpec &src, std::size_t k,
                                    const SearchConfig &cfg);

/// Same search restricted to A = S_hat with E d(S, S_hat) <= D.
RegionFrontier qb_region(const SourceSpec &src, const SearchConfig &cfg);

} // namespace crr
