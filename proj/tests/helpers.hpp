#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "crr/probability.hpp"
#include "crr/source.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline std::string data_path(const std::string &name) {
  return std::string(CRR_DATA_DIR) + "/" + name;
}

/// Random point of the simplex; each coordinate is zeroed with probability
/// `zero_prob`, keeping at least one positive entry.
inline std::vector<double> random_simplex(Rng &rng, std::size_t n,
                                          double zero_prob = 0.0) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v(n);
  double total = 0.0;
  for (auto &x : v) {
    x = unit(rng) < zero_prob ? 0.0 : expo(rng);
    total += x;
  }
  if (total == 0.0) {
    v[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
    total = 1.0;
  }
  for (auto &x : v) x /= total;
  return v;
}

inline crr::JointPmf random_pmf(Rng &rng,
                                const std::vector<std::pair<std::string, std::size_t>> &vars,
                                double zero_prob = 0.0) {
  std::vector<crr::Alphabet> alphabets;
  std::size_t cells = 1;
  for (const auto &[name, n] : vars) {
    alphabets.push_back(crr::Alphabet::range(name, n));
    cells *= n;
  }
  return crr::JointPmf(std::move(alphabets), random_simplex(rng, cells, zero_prob));
}

inline crr::Channel random_channel(Rng &rng, std::vector<crr::Alphabet> from,
                                   crr::Alphabet to, double zero_prob = 0.0) {
  std::size_t rows = 1;
  for (const auto &a : from) rows *= a.size();
  std::vector<double> data;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = random_simplex(rng, to.size(), zero_prob);
    data.insert(data.end(), row.begin(), row.end());
  }
  return crr::Channel(std::move(from), std::move(to), std::move(data));
}

/// Random source over S, U, V with full-support S and Hamming distortion.
inline crr::SourceSpec random_source(Rng &rng, std::size_t ns, std::size_t nu,
                                     std::size_t nv, double target,
                                     double zero_prob = 0.0) {
  for (;;) {
    auto p = random_pmf(rng, {{"S", ns}, {"U", nu}, {"V", nv}}, zero_prob);
    bool full = true;
    for (double m : crr::marginal_masses(p, {"S"})) full = full && m > 1e-9;
    if (!full) continue;
    auto d = crr::DistortionMeasure::hamming(p.variable("S"));
    return crr::SourceSpec(std::move(p), std::move(d), target);
  }
}

/// (A1,A2) - S - (B1,B2) built as p(s) p(a1,a2|s) p(b1,b2|s).
inline crr::JointPmf random_five_tuple(Rng &rng, std::size_t na1, std::size_t na2,
                                       std::size_t ns, std::size_t nb1,
                                       std::size_t nb2, double zero_prob = 0.2) {
  const auto ps = random_simplex(rng, ns);
  std::vector<double> mass(na1 * na2 * ns * nb1 * nb2, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    const auto pa = random_simplex(rng, na1 * na2, zero_prob);
    const auto pb = random_simplex(rng, nb1 * nb2, zero_prob);
    for (std::size_t a = 0; a < na1 * na2; ++a)
      for (std::size_t b = 0; b < nb1 * nb2; ++b)
        mass[(a * ns + s) * nb1 * nb2 + b] = ps[s] * pa[a] * pb[b];
  }
  return crr::JointPmf({crr::Alphabet::range("A1", na1), crr::Alphabet::range("A2", na2),
                        crr::Alphabet::range("S", ns), crr::Alphabet::range("B1", nb1),
                        crr::Alphabet::range("B2", nb2)},
                       std::move(mass));
}

inline double h2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

inline double conv(double x, double y) { return x * (1 - y) + y * (1 - x); }

} // namespace testutil
