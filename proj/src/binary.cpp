#include "crr/binary.hpp"

#include <algorithm>
#include <cmath>

#include "crr/errors.hpp"

namespace crr {

namespace {

RateCorner closed_corner(double rho, double delta, double D) {
  const double hd = binary_entropy(D);
  return {binary_entropy(binary_convolution(rho, D)) - hd,
          binary_entropy(binary_convolution(binary_convolution(rho, delta), D)) -
              hd};
}

std::vector<DemoRow> demo_rows(double rho, double D,
                               const std::vector<double> &deltas,
                               const RateCorner &limit, double base_a) {
  std::vector<DemoRow> rows;
  for (double delta : deltas) {
    DemoRow row;
    row.delta = delta;
    row.corner = binary_region(rho, delta, D).points.front().corner;
    row.gap = row.corner.a - base_a;
    row.limit_error = std::fabs(row.corner.b - limit.b);
    rows.push_back(row);
  }
  return rows;
}

bool stable(const std::vector<DemoRow> &rows, bool towards_one) {
  if (rows.empty()) return false;
  std::vector<DemoRow> sorted = rows;
  // Order from the farthest delta to the one nearest the degenerate point.
  std::sort(sorted.begin(), sorted.end(), [&](const DemoRow &x, const DemoRow &y) {
    return towards_one ? x.delta < y.delta : x.delta > y.delta;
  });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].gap > 0.0)) return false;
    if (std::fabs(sorted[i].gap - sorted[0].gap) > 1e-12) return false;
    if (i && sorted[i].limit_error > sorted[i - 1].limit_error + 1e-15)
      return false;
  }
  return true;
}

} // namespace

RegionFrontier binary_region(double rho, double delta, double D) {
  if (delta == 0.0 || delta == 1.0)
    throw PreconditionError(
        "closed form not applicable at delta = 0 or 1 (U and V are equivalent)");
  if (!(rho > 0.0 && rho < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw PreconditionError("binary region needs 0 < rho, delta < 1");
  if (!(D >= 0.0) || !std::isfinite(D))
    throw PreconditionError("target distortion must be finite and >= 0");
  RegionFrontier out;
  out.D = D;
  out.aux_size = 2;
  if (D >= 0.5) {
    out.points.push_back({{0.0, 0.0}, {1.0, 0.0, 1.0, 0.0}});
    return out;
  }
  out.points.push_back({closed_corner(rho, delta, D), {1.0 - D, D, D, 1.0 - D}});
  return out;
}

DemoReport discontinuity_demo(double rho, double D,
                              const std::vector<double> &deltas) {
  if (!(rho > 0.0 && rho < D && D < 0.5))
    throw PreconditionError("discontinuity demo needs 0 < rho < D < 1/2");
  if (deltas.empty()) throw PreconditionError("delta list must be non-empty");
  for (double d : deltas)
    if (!(d > 0.0 && d < 1.0))
      throw PreconditionError("every delta must lie in (0, 1)");

  DemoReport rep;
  rep.rho = rho;
  rep.D = D;
  const double g = binary_entropy(binary_convolution(rho, D)) - binary_entropy(D);
  rep.limit = {g, g};

  const auto degenerate = [&](double delta, RateCorner &corner, double &dist) {
    const SourceSpec src = binary_family_source(rho, delta, D);
    const auto c = eval_star_candidate(
        src, Channel::constant({src.source_alphabet()}, Alphabet::range("A", 1), 0));
    if (!c.feasible_at(D))
      throw DegenerateError("constant auxiliary misses the target on the "
                            "degenerate source");
    corner = c.corner;
    dist = c.achieved_distortion;
  };
  degenerate(0.0, rep.zero_corner, rep.zero_distortion);
  degenerate(1.0, rep.one_corner, rep.one_distortion);

  rep.rows = demo_rows(rho, D, deltas, rep.limit, rep.zero_corner.a);
  std::vector<double> mirrored;
  for (double d : deltas) mirrored.push_back(1.0 - d);
  rep.mirror_rows = demo_rows(rho, D, mirrored, rep.limit, rep.one_corner.a);

  rep.gap = rep.limit.a - rep.zero_corner.a;
  rep.gap_positive = rep.gap > 0.0;
  rep.monotone_stable = stable(rep.rows, false) && stable(rep.mirror_rows, true);
  return rep;
}

} // namespace crr
