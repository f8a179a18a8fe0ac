#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crr/candidates.hpp"
#include "crr/errors.hpp"
#include "crr/gacs_korner.hpp"
#include "crr/pruning.hpp"
#include "helpers.hpp"

using namespace crr;

namespace {

/// Applies a random relabeling to variable `name` of p, keeping its name.
JointPmf relabel(testutil::Rng &rng, const JointPmf &p, const std::string &name) {
  const Alphabet &a = p.variable(name);
  std::vector<std::size_t> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto q = compose(p, Channel::deterministic({a}, Alphabet::range("tmp", a.size()), perm),
                         {name});
  VarList keep;
  for (const auto &n : q.names())
    if (n != name) keep.push_back(n);
  return marginalize(q, keep).with_renamed("tmp", name);
}

} // namespace

TEST_CASE("entropy identities on random pmfs") {
  testutil::Rng rng(100);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testutil::random_pmf(rng, {{"X", 2 + trial % 3}, {"Y", 3}, {"Z", 2}}, 0.3);
    const double hxyz = entropy(p, {"X", "Y", "Z"});
    const double chain = entropy(p, {"X"}) + conditional_entropy(p, {"Y"}, {"X"}) +
                         conditional_entropy(p, {"Z"}, {"X", "Y"});
    CHECK(std::fabs(hxyz - chain) <= 1e-12);
    const double i = conditional_mutual_information(p, {"X"}, {"Y"}, {"Z"});
    CHECK(i >= 0.0);
    CHECK(std::fabs(i - conditional_mutual_information(p, {"Y"}, {"X"}, {"Z"})) <= 1e-12);
    CHECK(std::fabs(i - (conditional_entropy(p, {"X"}, {"Z"}) -
                         conditional_entropy(p, {"X"}, {"Y", "Z"}))) <= 1e-12);
    CHECK(entropy(p, {"X"}) <= std::log2(2.0 + trial % 3) + 1e-12);
  }
}

TEST_CASE("compose then marginalize recovers the input") {
  testutil::Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testutil::random_pmf(rng, {{"X", 3}, {"Y", 2}}, 0.3);
    const auto ch = testutil::random_channel(rng, {p.variable("X"), p.variable("Y")},
                                             Alphabet::range("A", 3), 0.3);
    const auto q = compose(p, ch, {"X", "Y"});
    CHECK(variational_distance(marginalize(q, {"X", "Y"}), p) <= 1e-14);
    CHECK(check_markov(q, {"A"}, {"X", "Y"}, {}));
  }
}

TEST_CASE("variational distance is a metric") {
  testutil::Rng rng(102);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = testutil::random_pmf(rng, {{"X", 4}}, 0.2);
    const auto q = testutil::random_pmf(rng, {{"X", 4}}, 0.2);
    const auto r = testutil::random_pmf(rng, {{"X", 4}}, 0.2);
    CHECK(variational_distance(p, r) <=
          variational_distance(p, q) + variational_distance(q, r) + 1e-15);
    CHECK(variational_distance(p, q) == doctest::Approx(variational_distance(q, p)));
    CHECK(variational_distance(p, q) <= 2.0 + 1e-15);
  }
}

TEST_CASE("support product check matches a brute-force scan") {
  testutil::Rng rng(103);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nx = 1 + trial % 3, ny = 1 + (trial / 3) % 3;
    const auto p = testutil::random_pmf(rng, {{"X", nx}, {"Y", ny}}, 0.35);
    const auto px = marginal_masses(p, {"X"}), py = marginal_masses(p, {"Y"});
    bool product = true;
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y)
        product = product && ((px[x] > 0 && py[y] > 0) == p.positive(x * ny + y));
    CHECK(support_product_check(p, {"X"}, {"Y"}) == product);
  }
}

TEST_CASE("common part is invariant under relabeling") {
  testutil::Rng rng(104);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = testutil::random_pmf(rng, {{"X", 4}, {"Y", 4}}, 0.6);
    const auto q = relabel(rng, relabel(rng, p, "X"), "Y");
    auto a = gk_partition(p, {"X"}, {"Y"}).class_mass;
    auto b = gk_partition(q, {"X"}, {"Y"}).class_mass;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a[i] - b[i]) <= 1e-14);
    // H(GK) never exceeds the mutual information.
    const auto part = gk_partition(p, {"X"}, {"Y"});
    CHECK(entropy(gk_variable(part), {"GK"}) <=
          mutual_information(p, {"X"}, {"Y"}) + 1e-12);
  }
}

TEST_CASE("candidate corners obey the basic bounds") {
  testutil::Rng rng(105);
  for (int trial = 0; trial < 150; ++trial) {
    const SourceSpec src = testutil::random_source(rng, 3, 2, 2, 0.3, 0.3);
    const auto q = testutil::random_channel(rng, {src.source_alphabet()},
                                            Alphabet::range("A", 3), 0.3);
    const auto c = eval_star_candidate(src, q);
    CHECK(c.corner.a <= conditional_entropy(src.pmf(), {"S"}, {"U"}) + 1e-12);
    CHECK(c.corner.b <= conditional_entropy(src.pmf(), {"S"}, {"V"}) + 1e-12);
    CHECK(c.achieved_distortion >= underline_distortion(src) - 1e-12);
    // The common part never does worse than the best fixed symbol.
    const auto ps = marginal_masses(src.pmf(), {"S"});
    double fixed = 1e300;
    for (std::size_t t = 0; t < 3; ++t) {
      double e = 0.0;
      for (std::size_t s = 0; s < 3; ++s) e += ps[s] * src.distortion()(s, t);
      fixed = std::min(fixed, e);
    }
    CHECK(c.achieved_distortion <= fixed + 1e-12);
  }
}

TEST_CASE("star corners are double-dagger corners") {
  testutil::Rng rng(106);
  for (int trial = 0; trial < 100; ++trial) {
    const SourceSpec src = testutil::random_source(rng, 2 + trial % 2, 2, 2, 0.3, 0.3);
    const auto qa = testutil::random_channel(rng, {src.source_alphabet()},
                                             Alphabet::range("A", 2 + trial % 2), 0.3);
    const auto star = eval_star_candidate(src, qa);
    const auto ev = eval_triple_candidate(
        src, qa, lift_copy_of_a(qa.to(), src.source_alphabet(), "B"),
        lift_copy_of_a(qa.to(), src.source_alphabet(), "C"));
    CHECK(std::fabs(ev.ddag.a - star.corner.a) <= 1e-12);
    CHECK(std::fabs(ev.ddag.b - star.corner.b) <= 1e-12);
    CHECK(std::fabs(ev.candidate.achieved_distortion - star.achieved_distortion) <= 1e-12);
  }
}

TEST_CASE("dagger corners are dominated by double-dagger corners") {
  testutil::Rng rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const SourceSpec src = testutil::random_source(rng, 2, 2, 1 + trial % 2, 0.3, 0.3);
    const Alphabet &s = src.source_alphabet();
    const auto qa = testutil::random_channel(rng, {s}, Alphabet::range("A", 2), 0.3);
    const auto qb = testutil::random_channel(rng, {qa.to(), s}, Alphabet::range("B", 2), 0.3);
    const auto qc = testutil::random_channel(rng, {qa.to(), s}, Alphabet::range("C", 3), 0.3);
    const auto ev = eval_triple_candidate(src, qa, qb, qc);
    CHECK(ev.dag.a == ev.ddag.a);
    CHECK(ev.dag.b >= ev.ddag.b - 1e-12);
    CHECK(ev.ddag.a >= -1e-12);
    CHECK(ev.ddag.b >= -1e-12);
  }
}

TEST_CASE("time sharing is linear in corner and distortion") {
  testutil::Rng rng(108);
  for (int trial = 0; trial < 100; ++trial) {
    const SourceSpec src = testutil::random_source(rng, 2, 2, 2, 0.3, 0.3);
    const auto c1 = eval_star_candidate(
        src, testutil::random_channel(rng, {src.source_alphabet()}, Alphabet::range("A", 2), 0.3));
    const auto c2 = eval_star_candidate(
        src, testutil::random_channel(rng, {src.source_alphabet()}, Alphabet::range("A", 3), 0.3));
    for (double lam : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      const auto t = time_share(src, c1, c2, lam);
      CHECK(std::fabs(t.corner.a - (lam * c1.corner.a + (1 - lam) * c2.corner.a)) <= 1e-9);
      CHECK(std::fabs(t.corner.b - (lam * c1.corner.b + (1 - lam) * c2.corner.b)) <= 1e-9);
      CHECK(std::fabs(t.achieved_distortion - (lam * c1.achieved_distortion +
                                               (1 - lam) * c2.achieved_distortion)) <= 1e-9);
    }
  }
}

TEST_CASE("method A guarantees on random instances") {
  testutil::Rng rng(109);
  int run = 0, cut = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const MarkovFiveTuple t(testutil::random_five_tuple(rng, 1 + trial % 4, 2, 2 + trial % 2, 2, 1 + trial % 2, 0.3));
    const double eta = 0.05 + 0.6 * (trial % 10) / 10.0;
    const auto pa = marginal_masses(t.joint(), {"A1", "A2"});
    const double budget = min_positive_mass(t.joint(), {{"S"}}) * -std::expm1(-eta);
    std::vector<bool> keep(pa.size(), true);
    double dropped = 0.0;
    for (std::size_t a = 0; a < pa.size(); ++a)
      if (pa[a] > 0.0 && dropped + pa[a] <= budget && std::uniform_real_distribution<>(0, 1)(rng) < 0.7) {
        dropped += pa[a];
        keep[a] = false;
      }
    const auto res = prune_a(t, keep, eta);
    ++run;
    cut += dropped > 0.0;
    for (const auto &c : res.report.checks) {
      CAPTURE(c.name);
      CAPTURE(trial);
      CHECK(c.holds);
    }
    const auto ps = marginal_masses(t.joint(), {"S"});
    const auto qs = marginal_masses(res.pruned.joint(), {"S"});
    for (std::size_t s = 0; s < ps.size(); ++s) CHECK(std::fabs(ps[s] - qs[s]) <= 1e-12);
    CHECK(check_markov(res.pruned.joint(), {"A1", "A2"}, {"S"}, {"B1", "B2"}));
  }
  CHECK(run == 200);
  CHECK(cut > 50);
}

TEST_CASE("method B guarantees on random instances") {
  testutil::Rng rng(110);
  int cut = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const MarkovFiveTuple t(testutil::random_five_tuple(rng, 1 + trial % 4, 2, 2 + trial % 2, 2, 1 + trial % 2, 0.2));
    const double eta = 0.05 + 0.9 * (trial % 10) / 10.0;
    const double delta_max = min_positive_mass(t.joint(), {{"S"}}) * -std::expm1(-eta);
    const double delta = delta_max * std::uniform_real_distribution<>(0, 1)(rng);
    std::vector<std::vector<bool>> events;
    for (int e = 0; e < 3; ++e) {
      std::vector<bool> f(t.size_b());
      for (std::size_t b = 0; b < f.size(); ++b) f[b] = rng() % 2;
      events.push_back(f);
    }
    const auto res = prune_b(t, delta, eta, events);
    cut += res.report.l1 > 0.0;
    for (const auto &c : res.report.checks) {
      CAPTURE(c.name);
      CAPTURE(trial);
      CHECK(c.holds);
    }
    const auto psb = marginal_masses(t.joint(), {"S", "B1", "B2"});
    const auto qsb = marginal_masses(res.pruned.joint(), {"S", "B1", "B2"});
    for (std::size_t i = 0; i < psb.size(); ++i) CHECK(std::fabs(psb[i] - qsb[i]) <= 1e-12);
    CHECK(check_markov(res.pruned.joint(), {"A1", "A2"}, {"S"}, {"B1", "B2"}));
  }
  CHECK(cut > 20);
}

TEST_CASE("agreement bound on random instances") {
  testutil::Rng rng(111);
  std::uniform_real_distribution<> unit(0, 1);
  int checked = 0;
  while (checked < 500) {
    const std::size_t nx = 2 + rng() % 4, ny = 2 + rng() % 4, nz = 2 + rng() % 3;
    // Concentrate both guesses on a common symbol.
    const std::size_t z0 = rng() % nz;
    std::vector<std::size_t> f(nx), g(ny);
    for (auto &z : f) z = rng() % nz;
    for (auto &z : g) z = rng() % nz;
    f[0] = g[0] = z0;
    auto px = testutil::random_simplex(rng, nx), py = testutil::random_simplex(rng, ny);
    const double wx = 0.95 + 0.05 * unit(rng), wy = 0.95 + 0.05 * unit(rng);
    for (auto &m : px) m *= 1 - wx;
    for (auto &m : py) m *= 1 - wy;
    px[0] += wx;
    py[0] += wy;
    double agree = 0.0;
    std::vector<double> qf(nz, 0.0), qg(nz, 0.0);
    for (std::size_t x = 0; x < nx; ++x) qf[f[x]] += px[x];
    for (std::size_t y = 0; y < ny; ++y) qg[g[y]] += py[y];
    for (std::size_t z = 0; z < nz; ++z) agree += qf[z] * qg[z];
    if (1 - agree >= 1.0 / 25) continue;
    const auto r = agreement_point(px, py, f, g, nz);
    CHECK(std::fabs(r.mismatch - (1 - agree)) <= 1e-12);
    CHECK(r.prob_f >= r.bound - 1e-12);
    CHECK(r.prob_g >= r.bound - 1e-12);
    CHECK(r.bound > 0.5);
    ++checked;
  }
}
