#include <doctest.h>

#include <cmath>

#include "../src/star_kernel.hpp"
#include "crr/binary.hpp"
#include "crr/candidates.hpp"
#include "crr/region_search.hpp"
#include "helpers.hpp"

using namespace crr;
using testutil::conv;
using testutil::h2;

namespace {

SearchConfig quick(double grid = 0.05) {
  SearchConfig cfg;
  cfg.grid = grid;
  cfg.restarts = 16;
  return cfg;
}

/// S uniform on n symbols with U = V = S.
SourceSpec fully_shared(std::size_t n, double target) {
  std::vector<double> m(n * n * n, 0.0);
  for (std::size_t s = 0; s < n; ++s) m[(s * n + s) * n + s] = 1.0 / n;
  JointPmf p({Alphabet::range("S", n), Alphabet::range("U", n), Alphabet::range("V", n)}, m);
  auto d = DistortionMeasure::hamming(p.variable("S"));
  return SourceSpec(std::move(p), std::move(d), target);
}

/// Binary family with d(s, t) = 0.1 + 0.9 [s != t], so D_min = 0.1.
SourceSpec offset_source(double target) {
  JointPmf p = binary_family_pmf(0.1, 0.2);
  const Alphabet &s = p.variable("S");
  DistortionMeasure d(s, Alphabet::range("Shat", 2), {0.1, 1.0, 1.0, 0.1}, 1.0);
  return SourceSpec(std::move(p), std::move(d), target);
}

Channel witness_channel(const SourceSpec &src, const FrontierPoint &pt, std::size_t k) {
  return Channel({src.source_alphabet()}, Alphabet::range("A", k), pt.witness);
}

} // namespace

TEST_CASE("lambda sweep") {
  const auto &l = lambda_sweep();
  REQUIRE(l.size() == 21);
  CHECK(l.front() == 0.0);
  CHECK(l.back() == 1.0);
  CHECK(l[10] == doctest::Approx(0.5));
}

TEST_CASE("pareto reduction") {
  std::vector<FrontierPoint> pts = {
      {{0.3, 0.5}, {}}, {{0.1, 0.9}, {}}, {{0.2, 0.95}, {}}, {{0.4, 0.5 - 1e-8}, {}},
      {{0.5, 0.2}, {}}, {{0.1, 0.8}, {}}};
  pareto_reduce(pts);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].corner.a == 0.1);
  CHECK(pts[0].corner.b == 0.8);
  CHECK(pts[1].corner.a == 0.3);
  CHECK(pts[2].corner.a == 0.5);
}

TEST_CASE("D at or above dbar gives the origin") {
  for (double D : {1.0, 1.5}) {
    const auto f = optimize_star_region(binary_family_source(0.05, 0.2, D), 2, quick());
    REQUIRE(f.points.size() == 1);
    CHECK(f.points[0].corner.a == 0.0);
    CHECK(f.points[0].corner.b == 0.0);
    const auto q = qb_region(binary_family_source(0.3, 0.1, D), quick());
    REQUIRE(q.points.size() == 1);
    CHECK(q.points[0].corner.b == 0.0);
  }
}

TEST_CASE("quantize-and-bin on the binary family matches the closed form") {
  for (double D : {0.05, 0.1, 0.2, 0.3}) {
    const auto f = qb_region(binary_family_source(0.05, 0.2, D), quick(0.02));
    CAPTURE(D);
    REQUIRE_FALSE(f.infeasible);
    const RateCorner want{h2(conv(0.05, D)) - h2(D), h2(conv(0.23, D)) - h2(D)};
    CHECK(frontier_achieves(f, want, 5e-3));
    // Inner bound: nothing strictly better than the optimum.
    for (const auto &pt : f.points)
      CHECK(pt.corner.a + pt.corner.b >= want.a + want.b - 5e-3);
  }
}

TEST_CASE("single-auxiliary search on the binary family") {
  const auto f = optimize_star_region(binary_family_source(0.05, 0.2, 0.1), 2, quick());
  const RateCorner want{0.115243218, 0.391848413};
  CHECK(frontier_achieves(f, want, 5e-3));
  CHECK(f.aux_size == 2);
}

TEST_CASE("shared side information makes lossless recovery free") {
  const auto f = optimize_star_region(fully_shared(3, 0.0), 0, quick());
  REQUIRE_FALSE(f.infeasible);
  CHECK(frontier_achieves(f, {0.0, 0.0}, 1e-9));
}

TEST_CASE("targets below the minimum distortion are infeasible") {
  const auto f = qb_region(offset_source(0.05), quick());
  CHECK(f.infeasible);
  CHECK(f.d_min == doctest::Approx(0.1));
  CHECK(f.points.empty());
  const auto g = optimize_star_region(offset_source(0.05), 2, quick());
  CHECK(g.infeasible);
  const auto ok = qb_region(offset_source(0.1), quick());
  CHECK_FALSE(ok.infeasible);
}

TEST_CASE("search is deterministic in the seed and independent of threads") {
  testutil::Rng rng(99);
  const SourceSpec src = testutil::random_source(rng, 3, 2, 2, 0.25, 0.2);
  SearchConfig cfg = quick();
  cfg.exhaustive_cells = 0; // force the restart path
  cfg.restarts = 6;
  const auto a = optimize_star_region(src, 3, cfg);
  const auto b = optimize_star_region(src, 3, cfg);
  cfg.threads = 3;
  const auto c = optimize_star_region(src, 3, cfg);
  REQUIRE(a.points.size() == b.points.size());
  REQUIRE(a.points.size() == c.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].corner.a == b.points[i].corner.a);
    CHECK(a.points[i].corner.b == b.points[i].corner.b);
    CHECK(a.points[i].witness == c.points[i].witness);
  }
}

TEST_CASE("frontier shrinks as the target grows") {
  std::vector<RegionFrontier> fs;
  for (double D : {0.05, 0.15, 0.3}) fs.push_back(qb_region(binary_family_source(0.1, 0.3, D), quick()));
  CHECK(frontier_contains(fs[1], fs[0], 1e-9));
  CHECK(frontier_contains(fs[2], fs[1], 1e-9));
  CHECK_FALSE(frontier_contains(fs[0], fs[2], 1e-3));
}

TEST_CASE("witnesses reproduce their corners") {
  testutil::Rng rng(4);
  const SourceSpec src = testutil::random_source(rng, 2, 3, 2, 0.2, 0.2);
  const auto f = optimize_star_region(src, 3, quick());
  REQUIRE_FALSE(f.points.empty());
  for (const auto &pt : f.points) {
    const auto c = eval_star_candidate(src, witness_channel(src, pt, 3));
    CHECK(c.corner.a == doctest::Approx(pt.corner.a).epsilon(1e-9));
    CHECK(c.corner.b == doctest::Approx(pt.corner.b).epsilon(1e-9));
    CHECK(c.feasible_at(src.target()));
  }
}

TEST_CASE("quantize-and-bin witnesses lie in the single-auxiliary region") {
  testutil::Rng rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    const SourceSpec src = testutil::random_source(rng, 2, 2, 2, 0.15 + 0.05 * trial, 0.3);
    const auto f = qb_region(src, quick());
    for (const auto &pt : f.points) {
      const auto c = eval_star_candidate(src, witness_channel(src, pt, 2));
      CHECK(c.corner.a == doctest::Approx(pt.corner.a).epsilon(1e-9));
      CHECK(c.corner.b == doctest::Approx(pt.corner.b).epsilon(1e-9));
      // The auxiliary is a function of the common part, so its Bayes
      // reconstruction can only improve on using A directly.
      CHECK(c.feasible_at(src.target()));
    }
  }
}

TEST_CASE("padding the auxiliary alphabet keeps corners") {
  testutil::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const SourceSpec src = testutil::random_source(rng, 3, 2, 2, 0.3, 0.3);
    const auto q2 = testutil::random_channel(rng, {src.source_alphabet()},
                                             Alphabet::range("A", 2), 0.2);
    std::vector<double> rows;
    for (std::size_t s = 0; s < 3; ++s) {
      rows.push_back(q2(s, 0));
      rows.push_back(q2(s, 1));
      rows.push_back(0.0);
    }
    const Channel q3({src.source_alphabet()}, Alphabet::range("A", 3), rows);
    const auto c2 = eval_star_candidate(src, q2);
    const auto c3 = eval_star_candidate(src, q3);
    CHECK(c3.corner.a == doctest::Approx(c2.corner.a).epsilon(1e-12));
    CHECK(c3.corner.b == doctest::Approx(c2.corner.b).epsilon(1e-12));
    CHECK(c3.achieved_distortion == doctest::Approx(c2.achieved_distortion).epsilon(1e-12));
  }
}

TEST_CASE("flat kernel agrees with the generic evaluation") {
  testutil::Rng rng(57);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ns = 2 + trial % 3, k = 1 + trial % 4;
    const SourceSpec src =
        testutil::random_source(rng, ns, 1 + trial % 3, 1 + (trial / 3) % 3, 0.3, 0.4);
    const auto q = testutil::random_channel(rng, {src.source_alphabet()},
                                            Alphabet::range("A", k), 0.4);
    detail::StarKernel common(src, k, detail::StarKernel::Mode::kCommon);
    const auto ev = common.evaluate(q.data());
    const auto c = eval_star_candidate(src, q);
    CHECK(std::fabs(ev.a - c.corner.a) <= 1e-9);
    CHECK(std::fabs(ev.b - c.corner.b) <= 1e-9);
    CHECK(std::fabs(ev.distortion - c.achieved_distortion) <= 1e-9);

    const auto qd = testutil::random_channel(rng, {src.source_alphabet()},
                                             Alphabet::range("A", ns), 0.4);
    detail::StarKernel direct(src, ns, detail::StarKernel::Mode::kDirect);
    const auto ed = direct.evaluate(qd.data());
    const auto cd = eval_star_candidate(src, qd);
    double dist = 0.0;
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t t = 0; t < ns; ++t)
        dist += direct.source_mass(s) * qd(s, t) * (s == t ? 0.0 : 1.0);
    CHECK(std::fabs(ed.a - cd.corner.a) <= 1e-9);
    CHECK(std::fabs(ed.b - cd.corner.b) <= 1e-9);
    CHECK(std::fabs(ed.distortion - dist) <= 1e-12);
  }
}

TEST_CASE("smaller auxiliary alphabets never improve the frontier") {
  const SourceSpec src = binary_family_source(0.1, 0.3, 0.15);
  SearchConfig cfg = quick();
  const auto f2 = optimize_star_region(src, 2, cfg);
  const auto f3 = optimize_star_region(src, 3, cfg);
  CHECK(frontier_contains(f3, f2, 5e-3));
}

TEST_CASE("triples on case-A sources do not beat the single-auxiliary frontier") {
  testutil::Rng rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    // Full support makes supp(S,U,V) a product.
    const SourceSpec src = testutil::random_source(rng, 2, 2, 2, 0.2 + 0.05 * trial, 0.0);
    const auto star = optimize_star_region(src, 0, quick());
    REQUIRE_FALSE(star.infeasible);
    const Alphabet &s = src.source_alphabet();
    int feasible = 0;
    for (int i = 0; i < 60; ++i) {
      const auto qa = testutil::random_channel(rng, {s}, Alphabet::range("A", 2), 0.3);
      auto perturbed = [&](const char *name) {
        const Channel copy = lift_copy_of_a(qa.to(), s, name);
        const double eps = 0.2 * unit(rng);
        const auto noise = testutil::random_channel(rng, {qa.to(), s}, Alphabet::range(name, 2));
        std::vector<double> rows(copy.data().begin(), copy.data().end());
        for (std::size_t j = 0; j < rows.size(); ++j)
          rows[j] = (1 - eps) * rows[j] + eps * noise.data()[j];
        return Channel({qa.to(), s}, Alphabet::range(name, 2), rows);
      };
      const auto ev = eval_triple_candidate(src, qa, perturbed("B"), perturbed("C"));
      if (!ev.feasible) continue;
      ++feasible;
      CAPTURE(ev.ddag.a);
      CAPTURE(ev.ddag.b);
      CHECK(frontier_achieves(star, ev.ddag, 5e-3));
    }
    CHECK(feasible > 0);
  }
}
