#include "star_kernel.hpp"

#include <algorithm>
#include <cmath>

#include "crr/errors.hpp"

namespace crr::detail {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

} // namespace

StarKernel::StarKernel(const SourceSpec &src, std::size_t k, Mode mode)
    : ns_(src.source_alphabet().size()), nu_(src.pmf().variable("U").size()),
      nv_(src.pmf().variable("V").size()),
      nt_(src.distortion().recon().size()), k_(k), mode_(mode) {
  if (k_ == 0) throw PreconditionError("auxiliary alphabet must be non-empty");
  if (mode_ == Mode::kDirect && k_ != nt_)
    throw PreconditionError("direct mode needs |A| equal to the reconstruction size");
  psuv_ = marginal_masses(src.pmf(), {"S", "U", "V"});
  psu_ = marginal_masses(src.pmf(), {"S", "U"});
  psv_ = marginal_masses(src.pmf(), {"S", "V"});
  ps_ = marginal_masses(src.pmf(), {"S"});
  d_.resize(ns_ * nt_);
  for (std::size_t s = 0; s < ns_; ++s)
    for (std::size_t t = 0; t < nt_; ++t) d_[s * nt_ + t] = src.distortion()(s, t);
  scratch_joint_.resize(std::max(nu_, nv_) * k_);
  scratch_class_.resize((nu_ + nv_) * ns_);
  parent_.resize(nu_ + nv_);
}

double StarKernel::rate_term(std::span<const double> q,
                             const std::vector<double> &pside, std::size_t nside,
                             double h_a_given_s) {
  // H(A|side) - H(A|S), which is I(S;A|side) under A - S - side.
  auto &pas = scratch_joint_;
  std::fill(pas.begin(), pas.begin() + nside * k_, 0.0);
  for (std::size_t s = 0; s < ns_; ++s)
    for (std::size_t x = 0; x < nside; ++x) {
      const double m = pside[s * nside + x];
      if (m == 0.0) continue;
      for (std::size_t a = 0; a < k_; ++a) pas[x * k_ + a] += m * q[s * k_ + a];
    }
  double h = 0.0;
  for (std::size_t x = 0; x < nside; ++x) {
    double total = 0.0;
    for (std::size_t a = 0; a < k_; ++a) {
      total += pas[x * k_ + a];
      h -= xlog2x(pas[x * k_ + a]);
    }
    h += xlog2x(total);
  }
  return std::max(0.0, h - h_a_given_s);
}

double StarKernel::common_distortion(std::span<const double> q) {
  const std::size_t nodes = nu_ + nv_;
  double total = 0.0;
  for (std::size_t a = 0; a < k_; ++a) {
    bool any = false;
    for (std::size_t s = 0; s < ns_; ++s) any = any || q[s * k_ + a] > 0.0;
    if (!any) continue;
    for (std::size_t i = 0; i < nodes; ++i) parent_[i] = i;
    for (std::size_t u = 0; u < nu_; ++u)
      for (std::size_t v = 0; v < nv_; ++v) {
        double m = 0.0;
        for (std::size_t s = 0; s < ns_; ++s)
          m += psuv_[(s * nu_ + u) * nv_ + v] * q[s * k_ + a];
        if (m > kSupportEps) {
          const std::size_t x = find_root(parent_, u);
          const std::size_t y = find_root(parent_, nu_ + v);
          if (x != y) parent_[std::max(x, y)] = std::min(x, y);
        }
      }
    auto &cs = scratch_class_;
    std::fill(cs.begin(), cs.end(), 0.0);
    for (std::size_t u = 0; u < nu_; ++u) {
      const std::size_t root = find_root(parent_, u);
      for (std::size_t v = 0; v < nv_; ++v)
        for (std::size_t s = 0; s < ns_; ++s)
          cs[root * ns_ + s] += psuv_[(s * nu_ + u) * nv_ + v] * q[s * k_ + a];
    }
    for (std::size_t r = 0; r < nu_; ++r) {
      double best = 0.0;
      bool first = true;
      for (std::size_t t = 0; t < nt_; ++t) {
        double c = 0.0;
        for (std::size_t s = 0; s < ns_; ++s) c += cs[r * ns_ + s] * d_[s * nt_ + t];
        if (first || c < best) {
          best = c;
          first = false;
        }
      }
      total += best;
    }
  }
  return total;
}

KernelEval StarKernel::evaluate(std::span<const double> q) {
  double h_a_given_s = 0.0;
  for (std::size_t s = 0; s < ns_; ++s) {
    double h = 0.0;
    for (std::size_t a = 0; a < k_; ++a) h -= xlog2x(q[s * k_ + a]);
    h_a_given_s += ps_[s] * h;
  }
  KernelEval out;
  out.a = rate_term(q, psu_, nu_, h_a_given_s);
  out.b = rate_term(q, psv_, nv_, h_a_given_s);
  if (mode_ == Mode::kDirect) {
    for (std::size_t s = 0; s < ns_; ++s)
      for (std::size_t a = 0; a < k_; ++a)
        out.distortion += ps_[s] * q[s * k_ + a] * d_[s * nt_ + a];
  } else {
    out.distortion = common_distortion(q);
  }
  return out;
}

} // namespace crr::detail
