#include "crr/frontier.hpp"

#include <algorithm>
#include <limits>

namespace crr {

std::vector<RateCorner> RegionFrontier::corners() const {
  std::vector<RateCorner> out;
  out.reserve(points.size());
  for (const auto &p : points) out.push_back(p.corner);
  return out;
}

void pareto_reduce(std::vector<FrontierPoint> &points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const FrontierPoint &x, const FrontierPoint &y) {
                     if (x.corner.a != y.corner.a) return x.corner.a < y.corner.a;
                     return x.corner.b < y.corner.b;
                   });
  std::vector<FrontierPoint> kept;
  double best_b = std::numeric_limits<double>::infinity();
  for (auto &p : points) {
    if (p.corner.b < best_b - kCornerDedup) {
      best_b = p.corner.b;
      kept.push_back(std::move(p));
    }
  }
  points = std::move(kept);
}

double support_value(const RegionFrontier &f, double lambda) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto &p : f.points)
    best = std::min(best, lambda * p.corner.a + (1.0 - lambda) * p.corner.b);
  return best;
}

bool frontier_contains(const RegionFrontier &outer, const RegionFrontier &inner,
                       double tol) {
  for (int i = 0; i <= 20; ++i) {
    const double lambda = i / 20.0;
    if (support_value(outer, lambda) > support_value(inner, lambda) + tol)
      return false;
  }
  return true;
}

bool frontier_achieves(const RegionFrontier &f, const RateCorner &c, double tol) {
  for (const auto &p : f.points)
    if (p.corner.a <= c.a + tol && p.corner.b <= c.b + tol) return true;
  return false;
}

} // namespace crr
