#include "crr/region_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <thread>

#include "crr/errors.hpp"
#include "star_kernel.hpp"

namespace crr {

namespace {

using detail::KernelEval;
using detail::StarKernel;

constexpr double kMinStep = 1e-9;
constexpr double kImprove = 1e-13;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kReduceEvery = 50000;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Objective of one descent: +inf marks a disallowed point.
struct Objective {
  enum class Kind { kFeasibility, kScalar } kind;
  double lambda = 0.0;
  double target = 0.0;

  double operator()(const KernelEval &e) const {
    if (kind == Kind::kFeasibility) return std::max(0.0, e.distortion - target);
    if (e.distortion > target + kDistortionTol) return kInf;
    return lambda * e.a + (1.0 - lambda) * e.b;
  }
};

class Descent {
public:
  Descent(StarKernel &kernel, Objective obj) : kernel_(kernel), obj_(obj) {}

  /// Pattern search from `q` with steps step0, step0/2, ... down to kMinStep.
  /// Returns the objective value at the final point.
  double run(std::vector<double> &q, double step0) {
    double fq = obj_(kernel_.evaluate(q));
    for (double step = step0; step >= kMinStep;) {
      bool improved = single_moves(q, fq, step);
      if (!improved) improved = pair_moves(q, fq, step);
      if (!improved) step *= 0.5;
    }
    return fq;
  }

private:
  bool accept(std::vector<double> &q, double &fq, std::vector<double> &trial) {
    const double ft = obj_(kernel_.evaluate(trial));
    if (ft < fq - kImprove && std::isfinite(ft)) {
      q.swap(trial);
      fq = ft;
      return true;
    }
    return false;
  }

  bool single_moves(std::vector<double> &q, double &fq, double step) {
    const std::size_t ns = kernel_.sources(), k = kernel_.aux();
    bool any = false;
    std::vector<double> trial;
    for (std::size_t r = 0; r < ns; ++r)
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
          if (i == j || q[r * k + i] <= 0.0) continue;
          const double t = std::min(step, q[r * k + i]);
          trial = q;
          shift(trial, r, i, j, t);
          any = accept(q, fq, trial) || any;
        }
    return any;
  }

  /// Change of E d(S, A) per unit mass moved i -> j in row r (direct mode).
  double slope(std::size_t r, std::size_t i, std::size_t j) const {
    return kernel_.source_mass(r) * (kernel_.cost(r, j) - kernel_.cost(r, i));
  }

  bool pair_moves(std::vector<double> &q, double &fq, double step) {
    const std::size_t ns = kernel_.sources(), k = kernel_.aux();
    const bool direct = kernel_.mode() == StarKernel::Mode::kDirect;
    bool any = false;
    std::vector<double> trial;
    for (std::size_t r1 = 0; r1 < ns; ++r1)
      for (std::size_t r2 = r1 + 1; r2 < ns; ++r2)
        for (std::size_t i1 = 0; i1 < k; ++i1)
          for (std::size_t j1 = 0; j1 < k; ++j1) {
            if (i1 == j1 || q[r1 * k + i1] <= 0.0) continue;
            for (std::size_t i2 = 0; i2 < k; ++i2)
              for (std::size_t j2 = 0; j2 < k; ++j2) {
                if (i2 == j2 || q[r2 * k + i2] <= 0.0) continue;
                const double t1 = std::min(step, q[r1 * k + i1]);
                double amounts[2] = {std::min(step, q[r2 * k + i2]), -1.0};
                if (direct) {
                  // Second amount that keeps E d(S, A) unchanged.
                  const double s1 = slope(r1, i1, j1), s2 = slope(r2, i2, j2);
                  if (s1 * s2 < 0.0) {
                    const double t2 = -s1 * t1 / s2;
                    if (t2 <= q[r2 * k + i2]) amounts[1] = t2;
                  }
                }
                for (double t2 : amounts) {
                  if (t2 <= 0.0) continue;
                  trial = q;
                  shift(trial, r1, i1, j1, t1);
                  shift(trial, r2, i2, j2, t2);
                  if (accept(q, fq, trial)) {
                    any = true;
                    break;
                  }
                }
              }
          }
    return any;
  }

  void shift(std::vector<double> &q, std::size_t r, std::size_t i,
             std::size_t j, double t) const {
    const std::size_t k = kernel_.aux();
    q[r * k + i] = std::max(0.0, q[r * k + i] - t);
    q[r * k + j] += t;
  }

  StarKernel &kernel_;
  Objective obj_;
};

FrontierPoint make_point(const KernelEval &e, const std::vector<double> &q) {
  return {{e.a, e.b}, q};
}

std::vector<std::vector<std::size_t>> compositions(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k, 0);
  auto rec = [&](auto &self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == k) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (std::size_t x = 0; x <= left; ++x) {
      cur[pos] = left - x;
      self(self, pos + 1, x);
    }
  };
  rec(rec, 0, n);
  return out;
}

/// Number of grid points, saturating at `cap + 1`.
std::size_t grid_size(std::size_t per_row, std::size_t rows, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t r = 0; r < rows; ++r) {
    if (total > (cap + 1) / per_row) return cap + 1;
    total *= per_row;
  }
  return total;
}

class RegionSearch {
public:
  RegionSearch(const SourceSpec &src, std::size_t k, StarKernel::Mode mode,
               const SearchConfig &cfg)
      : src_(src), kernel_(src, k, mode), cfg_(cfg),
        ns_(src.source_alphabet().size()), k_(k) {
    if (!(cfg_.grid > 0.0 && cfg_.grid <= 1.0))
      throw PreconditionError("grid step must lie in (0, 1]");
    if (cfg_.restarts < 0) throw PreconditionError("restarts must be >= 0");
  }

  RegionFrontier run() {
    RegionFrontier out;
    out.D = src_.target();
    out.aux_size = k_;
    out.d_min = underline_distortion(src_);
    if (src_.target() < out.d_min - kDistortionTol) {
      out.infeasible = true;
      return out;
    }
    std::vector<FrontierPoint> points;
    if (src_.target() >= src_.distortion().dbar()) {
      std::vector<double> q(ns_ * k_, 0.0);
      const std::size_t t =
          kernel_.mode() == StarKernel::Mode::kDirect ? best_constant() : 0;
      for (std::size_t s = 0; s < ns_; ++s) q[s * k_ + t] = 1.0;
      points.push_back({{0.0, 0.0}, q});
    } else if (!exhaustive(points)) {
      multistart(points);
    }
    pareto_reduce(points);
    out.points = std::move(points);
    return out;
  }

private:
  std::size_t best_constant() const {
    std::size_t best = 0;
    double best_cost = kInf;
    for (std::size_t t = 0; t < k_; ++t) {
      double c = 0.0;
      for (std::size_t s = 0; s < ns_; ++s)
        c += kernel_.source_mass(s) * kernel_.cost(s, t);
      if (c < best_cost) {
        best_cost = c;
        best = t;
      }
    }
    return best;
  }

  Objective scalar(double lambda) const {
    return {Objective::Kind::kScalar, lambda, src_.target()};
  }

  bool exhaustive(std::vector<FrontierPoint> &points) {
    if (ns_ * k_ > cfg_.exhaustive_cells) return false;
    const auto n = static_cast<std::size_t>(std::llround(1.0 / cfg_.grid));
    if (n == 0) return false;
    const auto comps = compositions(n, k_);
    if (grid_size(comps.size(), ns_, cfg_.exhaustive_budget) >
        cfg_.exhaustive_budget)
      return false;

    const auto &sweep = lambda_sweep();
    std::vector<double> best_val(sweep.size(), kInf);
    std::vector<std::vector<double>> best_q(sweep.size());
    std::vector<std::size_t> odo(ns_, 0);
    std::vector<double> q(ns_ * k_);
    std::vector<FrontierPoint> found;
    const double inv = 1.0 / static_cast<double>(n);
    for (;;) {
      for (std::size_t s = 0; s < ns_; ++s)
        for (std::size_t a = 0; a < k_; ++a)
          q[s * k_ + a] = static_cast<double>(comps[odo[s]][a]) * inv;
      const KernelEval e = kernel_.evaluate(q);
      if (e.distortion <= src_.target() + kDistortionTol) {
        found.push_back(make_point(e, q));
        if (found.size() >= kReduceEvery) pareto_reduce(found);
        for (std::size_t l = 0; l < sweep.size(); ++l) {
          const double v = sweep[l] * e.a + (1.0 - sweep[l]) * e.b;
          if (v < best_val[l]) {
            best_val[l] = v;
            best_q[l] = q;
          }
        }
      }
      bool done = true;
      for (std::size_t pos = ns_; pos-- > 0;) {
        if (++odo[pos] < comps.size()) {
          done = false;
          break;
        }
        odo[pos] = 0;
      }
      if (done) break;
    }
    if (found.empty()) return false;

    for (std::size_t l = 0; l < sweep.size(); ++l) {
      std::vector<double> x = best_q[l];
      Descent(kernel_, scalar(sweep[l])).run(x, cfg_.grid / 2);
      found.push_back(make_point(kernel_.evaluate(x), x));
    }
    points.insert(points.end(), std::make_move_iterator(found.begin()),
                  std::make_move_iterator(found.end()));
    return true;
  }

  std::vector<std::vector<double>> anchors() const {
    std::vector<std::vector<double>> out;
    for (std::size_t t = 0; t < k_; ++t) {
      std::vector<double> q(ns_ * k_, 0.0);
      for (std::size_t s = 0; s < ns_; ++s) q[s * k_ + t] = 1.0;
      out.push_back(std::move(q));
    }
    std::vector<double> q(ns_ * k_, 0.0);
    if (kernel_.mode() == StarKernel::Mode::kDirect) {
      for (std::size_t s = 0; s < ns_; ++s) {
        std::size_t best = 0;
        for (std::size_t t = 1; t < k_; ++t)
          if (kernel_.cost(s, t) < kernel_.cost(s, best)) best = t;
        q[s * k_ + best] = 1.0;
      }
    } else {
      for (std::size_t s = 0; s < ns_; ++s) q[s * k_ + s % k_] = 1.0;
    }
    out.push_back(std::move(q));
    return out;
  }

  std::vector<double> random_start(std::size_t index) const {
    std::mt19937_64 rng(splitmix(cfg_.seed ^ splitmix(index)));
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> q(ns_ * k_);
    for (std::size_t s = 0; s < ns_; ++s) {
      double total = 0.0;
      for (std::size_t a = 0; a < k_; ++a) total += q[s * k_ + a] = expo(rng);
      for (std::size_t a = 0; a < k_; ++a) q[s * k_ + a] /= total;
    }
    return q;
  }

  std::vector<FrontierPoint> from_start(StarKernel &kernel,
                                        std::vector<double> q) const {
    std::vector<FrontierPoint> out;
    KernelEval e = kernel.evaluate(q);
    if (e.distortion > src_.target() + kDistortionTol) {
      Descent(kernel, {Objective::Kind::kFeasibility, 0.0, src_.target()})
          .run(q, cfg_.grid);
      e = kernel.evaluate(q);
      if (e.distortion > src_.target() + kDistortionTol) return out;
    }
    out.push_back(make_point(e, q));
    for (double lambda : lambda_sweep()) {
      Descent(kernel, scalar(lambda)).run(q, cfg_.grid / 2);
      out.push_back(make_point(kernel.evaluate(q), q));
    }
    pareto_reduce(out);
    return out;
  }

  void multistart(std::vector<FrontierPoint> &points) {
    std::vector<std::vector<double>> starts = anchors();
    for (int r = 0; r < cfg_.restarts; ++r)
      starts.push_back(random_start(static_cast<std::size_t>(r)));

    std::vector<std::vector<FrontierPoint>> results(starts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      StarKernel kernel = kernel_;
      for (std::size_t i; (i = next.fetch_add(1)) < starts.size();)
        results[i] = from_start(kernel, starts[i]);
    };
    const unsigned threads = std::max(1u, cfg_.threads);
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto &th : pool) th.join();
    }
    for (auto &r : results)
      points.insert(points.end(), std::make_move_iterator(r.begin()),
                    std::make_move_iterator(r.end()));
  }

  const SourceSpec &src_;
  StarKernel kernel_;
  SearchConfig cfg_;
  std::size_t ns_, k_;
};

} // namespace

const std::vector<double> &lambda_sweep() {
  static const std::vector<double> sweep = [] {
    std::vector<double> v;
    for (int i = 0; i <= 20; ++i) v.push_back(i / 20.0);
    return v;
  }();
  return sweep;
}

RegionFrontier optimize_star_region(const SourceSpec &src, std::size_t k,
                                    const SearchConfig &cfg) {
  if (k == 0) k = src.source_alphabet().size() + 2;
  return RegionSearch(src, k, StarKernel::Mode::kCommon, cfg).run();
}

RegionFrontier qb_region(const SourceSpec &src, const SearchConfig &cfg) {
  return RegionSearch(src, src.distortion().recon().size(),
                      StarKernel::Mode::kDirect, cfg)
      .run();
}

} // namespace crr
