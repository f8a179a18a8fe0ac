#include "crr/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crr/errors.hpp"

namespace crr {

namespace {

constexpr double kCheckSlack = 1e-9;
const VarList kOrder = {"A1", "A2", "S", "B1", "B2"};

PruneCheck check(std::string name, double achieved, double bound) {
  return {std::move(name), achieved, bound, achieved <= bound + kCheckSlack};
}

/// Joint of the pruned tuple: w(a1,a2,s) * p(b1,b2|s).
JointPmf assemble(const MarkovFiveTuple &t, const std::vector<double> &pas) {
  const JointPmf &p = t.joint();
  const std::size_t na = t.size_a1() * t.size_a2(), ns = t.size_s(),
                    nb = t.size_b();
  const auto psb = marginal_masses(p, {"S", "B1", "B2"});
  const auto ps = marginal_masses(p, {"S"});
  std::vector<double> mass(na * ns * nb, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t s = 0; s < ns; ++s) {
      const double w = pas[a * ns + s];
      if (w == 0.0) continue;
      for (std::size_t b = 0; b < nb; ++b)
        mass[(a * ns + s) * nb + b] = w * psb[s * nb + b] / ps[s];
    }
  return JointPmf(p.variables(), std::move(mass));
}

/// Fields shared by both methods.
void common_measures(const MarkovFiveTuple &orig, const JointPmf &pruned,
                     PruneReport &r) {
  const JointPmf &p = orig.joint();
  r.size_s = orig.size_s();
  r.m_s = min_positive_mass(p, {{"S"}});
  r.l1 = variational_distance(pruned, p);
  r.kl_nats = kl_divergence_nats(pruned, p);
  r.dh_single = std::fabs(conditional_entropy(pruned, {"S"}, {"A1", "B1"}) -
                          conditional_entropy(p, {"S"}, {"A1", "B1"}));
  r.dh_pair =
      std::fabs(conditional_entropy(pruned, {"S"}, {"A1", "A2", "B1", "B2"}) -
                conditional_entropy(p, {"S"}, {"A1", "A2", "B1", "B2"}));
  const double m_sb = min_positive_mass(p, {{"S", "B1", "B2"}});
  r.xi_at_delta = r.delta < m_sb / static_cast<double>(r.size_s)
                      ? xi_function(r.size_s, m_sb, r.delta)
                      : std::numeric_limits<double>::quiet_NaN();
}

/// Pr[(B1,B2) = b | (A1,A2) = a] of `q`, row-major |A| x |B|; rows of zero
/// mass stay zero.
std::vector<double> b_given_a(const JointPmf &q, std::size_t na, std::size_t nb) {
  auto m = marginal_masses(q, {"A1", "A2", "B1", "B2"});
  for (std::size_t a = 0; a < na; ++a) {
    double total = 0.0;
    for (std::size_t b = 0; b < nb; ++b) total += m[a * nb + b];
    for (std::size_t b = 0; b < nb; ++b)
      m[a * nb + b] = total > 0.0 ? m[a * nb + b] / total : 0.0;
  }
  return m;
}

void require_eta_delta(double eta, double eta_max, double delta, double m_s) {
  if (!(eta > 0.0 && eta < eta_max))
    throw PreconditionError("eta out of range");
  if (!(delta >= 0.0)) throw PreconditionError("delta must be >= 0");
  if (delta > m_s * (1.0 - std::exp(-eta)) + 1e-15)
    throw PreconditionError("delta exceeds m_S (1 - e^-eta)");
}

} // namespace

MarkovFiveTuple::MarkovFiveTuple(const JointPmf &joint, double tol)
    : joint_([&] {
        if (joint.rank() != 5)
          throw PreconditionError("five-tuple needs variables A1, A2, S, B1, B2");
        return marginalize(joint, kOrder);
      }()) {
  if (!check_markov(joint_, {"A1", "A2"}, {"S"}, {"B1", "B2"}, tol))
    throw PreconditionError("(A1,A2) - S - (B1,B2) does not hold");
  for (double m : marginal_masses(joint_, {"S"}))
    if (!(m > kSupportEps))
      throw PreconditionError("every symbol of S must have positive mass");
}

bool PruneReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const PruneCheck &c) { return c.holds; });
}

double xi_function(std::size_t size_s, double m, double x) {
  const double s = static_cast<double>(size_s);
  if (!(x >= 0.0) || !(s * x < m))
    throw PreconditionError("Xi argument outside [0, m/|S|)");
  if (x == 0.0) return 0.0;
  return s * x / (m - s * x) * std::log2(s * s * (m - s * x) / x);
}

double entropy_delta_bound(double eta, std::size_t size_s, double c) {
  if (size_s == 1) return 0.0; // H(S|anything) is identically zero
  const double root = std::pow(2.0 * eta, 0.25);
  const double s = static_cast<double>(size_s);
  return root * std::log2(s * s / root) +
         c * std::expm1(eta) * std::log2(s);
}

PruneResult prune_a(const MarkovFiveTuple &t, const std::vector<bool> &keep,
                    double eta) {
  const JointPmf &p = t.joint();
  const std::size_t na = t.size_a1() * t.size_a2(), ns = t.size_s(),
                    nb = t.size_b();
  if (keep.size() != na)
    throw PreconditionError("event must flag every (a1, a2) pair");
  const auto pas = marginal_masses(p, {"A1", "A2", "S"});
  const auto ps = marginal_masses(p, {"S"});
  double in_e = 0.0;
  std::vector<double> norm(ns, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    if (keep[a])
      for (std::size_t s = 0; s < ns; ++s) {
        in_e += pas[a * ns + s];
        norm[s] += pas[a * ns + s];
      }
  PruneReport r;
  r.method = 'a';
  r.eta = eta;
  r.delta = std::max(0.0, 1.0 - in_e);
  const double m_s = min_positive_mass(p, {{"S"}});
  require_eta_delta(eta, std::log(2.0), r.delta, m_s);
  for (std::size_t s = 0; s < ns; ++s) {
    if (!(norm[s] > 0.0))
      throw DegenerateError("event has zero probability given S = " +
                            p.variable("S").symbol(s));
    norm[s] /= ps[s];
  }

  std::vector<double> w(na * ns, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    if (keep[a])
      for (std::size_t s = 0; s < ns; ++s)
        w[a * ns + s] = pas[a * ns + s] / norm[s];
  JointPmf pruned = assemble(t, w);
  common_measures(t, pruned, r);

  const auto before = b_given_a(p, na, nb);
  const auto after = b_given_a(pruned, na, nb);
  const auto pa_new = marginal_masses(pruned, {"A1", "A2"});
  for (std::size_t a = 0; a < na; ++a) {
    if (!keep[a] || !(pa_new[a] > 0.0)) continue;
    for (std::size_t b = 0; b < nb; ++b)
      if (before[a * nb + b] > 0.0)
        r.inflation = std::max(r.inflation, after[a * nb + b] / before[a * nb + b]);
  }
  double entry = 0.0;
  for (std::size_t i = 0; i < p.cells(); ++i)
    if (p.positive(i) && pruned[i] > 0.0) entry = std::max(entry, pruned[i] / p[i]);

  const double hb = entropy_delta_bound(eta, ns, 2.0);
  r.checks = {check("a_l1", r.l1, 2.0 * r.delta / (m_s - r.delta)),
              check("a_l1_eta", r.l1, 2.0 * std::expm1(eta)),
              check("b_inflation", r.inflation, std::exp(eta)),
              check("c_kl", r.kl_nats, eta),
              check("d_entropy", r.dh_single, hb),
              check("e_entropy", r.dh_pair, hb),
              check("entry_inflation", entry, m_s / (m_s - r.delta))};
  return {MarkovFiveTuple(pruned), std::move(r)};
}

PruneResult prune_b(const MarkovFiveTuple &t, double delta, double eta,
                    const std::vector<std::vector<bool>> &events) {
  const JointPmf &p = t.joint();
  const std::size_t na = t.size_a1() * t.size_a2(), ns = t.size_s(),
                    nb = t.size_b();
  const double m_s = min_positive_mass(p, {{"S"}});
  require_eta_delta(eta, 1.0, delta, m_s);
  for (const auto &f : events)
    if (f.size() != nb) throw PreconditionError("event must flag every (b1, b2)");

  const auto pas = marginal_masses(p, {"A1", "A2", "S"});
  const auto pa = marginal_masses(p, {"A1", "A2"});
  const auto ps = marginal_masses(p, {"S"});
  std::vector<bool> edge(na * ns, false);
  std::vector<double> norm(ns, 0.0);
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t s = 0; s < ns; ++s) {
      const double m = pas[a * ns + s];
      if (m > kSupportEps && m / pa[a] > delta) {
        edge[a * ns + s] = true;
        norm[s] += m;
      }
    }
  for (std::size_t s = 0; s < ns; ++s)
    if (!(norm[s] > 0.0))
      throw DegenerateError("pruned support is empty for S = " +
                            p.variable("S").symbol(s));

  std::vector<double> w(na * ns, 0.0);
  for (std::size_t i = 0; i < na * ns; ++i)
    if (edge[i]) w[i] = pas[i] / (norm[i % ns] / ps[i % ns]);
  JointPmf pruned = assemble(t, w);

  PruneReport r;
  r.method = 'b';
  r.delta = delta;
  r.eta = eta;
  common_measures(t, pruned, r);

  // Zeroing: singletons plus caller events.
  const double m_b_s = min_positive_mass(p, {{"B1", "B2"}, {"S"}});
  const auto before = b_given_a(p, na, nb);
  const auto after = b_given_a(pruned, na, nb);
  const auto pa_new = marginal_masses(pruned, {"A1", "A2"});
  double worst = 0.0;
  auto zeroing = [&](const std::vector<bool> &f) {
    for (std::size_t a = 0; a < na; ++a) {
      if (!(pa[a] > kSupportEps)) continue;
      double pf = 0.0, pf_new = 0.0;
      for (std::size_t b = 0; b < nb; ++b)
        if (f[b]) {
          pf += before[a * nb + b];
          pf_new += after[a * nb + b];
        }
      if (pf > delta * m_b_s) continue;
      ++r.zeroing_cases;
      if (pa_new[a] > 0.0) worst = std::max(worst, pf_new);
    }
  };
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<bool> f(nb, false);
    f[b] = true;
    zeroing(f);
  }
  for (const auto &f : events) zeroing(f);

  const double s = static_cast<double>(ns);
  const double hb = entropy_delta_bound(eta, ns, 2.0 * s);
  r.checks = {check("a_l1", r.l1, 2.0 * delta * s / (m_s - delta)),
              check("a_l1_eta", r.l1, 2.0 * s * std::expm1(eta)),
              check("b_zeroing", worst, 0.0),
              check("c_kl", r.kl_nats, std::log(m_s / (m_s - delta))),
              check("c_kl_eta", r.kl_nats, eta),
              check("d_entropy", r.dh_single, hb),
              check("e_entropy", r.dh_pair, hb)};
  return {MarkovFiveTuple(pruned), std::move(r)};
}

std::vector<bool> event_from_mismatch(const MarkovFiveTuple &t,
                                      const MismatchPredicate &mismatch,
                                      double threshold) {
  const JointPmf &p = t.joint();
  const auto &sh = p.shape();
  const std::size_t na = t.size_a1() * t.size_a2();
  std::vector<double> bad(na, 0.0), total(na, 0.0);
  for (std::size_t cell = 0; cell < p.cells(); ++cell) {
    if (p[cell] == 0.0) continue;
    const auto idx = p.unravel(cell);
    const std::size_t a = idx[0] * sh[1] + idx[1];
    total[a] += p[cell];
    if (mismatch(idx[0], idx[1], idx[2], idx[3], idx[4])) bad[a] += p[cell];
  }
  std::vector<bool> keep(na, true);
  for (std::size_t a = 0; a < na; ++a)
    if (total[a] > 0.0 && bad[a] / total[a] > threshold) keep[a] = false;
  return keep;
}

AgreementResult agreement_point(const std::vector<double> &px,
                                const std::vector<double> &py,
                                const std::vector<std::size_t> &f,
                                const std::vector<std::size_t> &g,
                                std::size_t nz) {
  if (px.size() != f.size() || py.size() != g.size() || nz == 0)
    throw PreconditionError("maps must cover the alphabets");
  for (auto z : f) if (z >= nz) throw PreconditionError("f value out of range");
  for (auto z : g) if (z >= nz) throw PreconditionError("g value out of range");
  for (const auto *v : {&px, &py}) {
    double total = 0.0;
    for (double m : *v) {
      if (!(m >= 0.0)) throw PreconditionError("negative mass");
      total += m;
    }
    if (std::fabs(total - 1.0) > kMassTol)
      throw PreconditionError("marginal does not sum to one");
  }
  std::vector<double> qf(nz, 0.0), qg(nz, 0.0);
  for (std::size_t x = 0; x < px.size(); ++x) qf[f[x]] += px[x];
  for (std::size_t y = 0; y < py.size(); ++y) qg[g[y]] += py[y];
  AgreementResult r;
  // Independence: Pr[f(X) = g(Y)] = sum_z qf(z) qg(z).
  double agree = 0.0;
  for (std::size_t z = 0; z < nz; ++z) agree += qf[z] * qg[z];
  r.mismatch = std::max(0.0, 1.0 - agree);
  if (!(r.mismatch < 1.0 / 25.0))
    throw PreconditionError("mismatch probability must be below 1/25");
  for (std::size_t z = 1; z < nz; ++z)
    if (qf[z] > qf[r.z_star]) r.z_star = z;
  r.bound = (1.0 + std::sqrt(1.0 - r.mismatch - std::sqrt(r.mismatch))) / 2.0;
  r.prob_f = qf[r.z_star];
  r.prob_g = qg[r.z_star];
  return r;
}

} // namespace crr
