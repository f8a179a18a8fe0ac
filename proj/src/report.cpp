#include "crr/report.hpp"

#include <cmath>

#include "crr/format.hpp"

namespace crr {

namespace {

ojson num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round9(x);
}

} // namespace

std::string frontier_csv(const std::vector<RegionFrontier> &frontiers) {
  std::string out = std::string(kFrontierCsvHeader) + "\n";
  for (const auto &f : frontiers)
    for (std::size_t i = 0; i < f.points.size(); ++i)
      out += format9(f.D) + "," + std::to_string(i) + "," +
             format9(f.points[i].corner.a) + "," +
             format9(f.points[i].corner.b) + "\n";
  return out;
}

ojson corner_json(const RateCorner &c) {
  ojson j;
  j["r_uv_min"] = num(c.a);
  j["sum_rate_min"] = num(c.b);
  return j;
}

ojson frontier_json(const RegionFrontier &f) {
  ojson j;
  j["D"] = num(f.D);
  j["infeasible"] = f.infeasible;
  j["d_min"] = num(f.d_min);
  j["aux_size"] = f.aux_size;
  ojson corners = ojson::array();
  for (const auto &p : f.points) corners.push_back(corner_json(p.corner));
  j["corners"] = corners;
  return j;
}

ojson gk_json(const GKPartition &part) {
  ojson j;
  j["left"] = part.left_vars;
  j["right"] = part.right_vars;
  j["classes"] = part.class_count();
  ojson labels = ojson::array(), masses = ojson::array(), sizes = ojson::array();
  const auto counts = part.left_counts();
  for (std::size_t i = 0; i < part.class_count(); ++i) {
    labels.push_back(part.right_label(part.class_ids[i]));
    masses.push_back(num(part.class_mass[i]));
    sizes.push_back(counts[i]);
  }
  j["class_labels"] = labels;
  j["class_masses"] = masses;
  j["left_class_sizes"] = sizes;
  j["gk_entropy"] = num(entropy(gk_variable(part), {"GK"}));
  j["mapping_choices"] = mapping_choices(part);
  return j;
}

ojson case_report_json(const CaseReport &r) {
  ojson measured;
  measured["I(S;V|U)"] = num(r.i_s_v_given_u);
  measured["I(S;U|V)"] = num(r.i_s_u_given_v);
  measured["H(S|U)"] = num(r.h_s_given_u);
  measured["H(S|V)"] = num(r.h_s_given_v);
  measured["H(U|V)"] = num(r.h_u_given_v);
  measured["H(U|S)"] = num(r.h_u_given_s);
  measured["H(V|S)"] = num(r.h_v_given_s);
  measured["H(GK_UV)"] = num(r.h_gk_uv);
  measured["supp_S_UV_product"] = r.support_s_uv_product;
  measured["supp_S_U_product"] = r.support_s_u_product;
  measured["supp_U_V_product"] = r.support_u_v_product;
  ojson region;
  region["A"] = r.case_a;
  region["B"] = r.case_b;
  region["C"] = r.case_c;
  region["D"] = r.case_d;
  region["E"] = r.case_e;
  region["F"] = r.case_f;
  ojson qb;
  qb["A'"] = r.qb_a;
  qb["B'"] = r.qb_b;
  qb["C'"] = r.qb_c;
  ojson implied;
  implied["H(S|V)=0"] = r.h_s_given_v_zero;
  implied["H(U|V)=0"] = r.h_u_given_v_zero;
  ojson j;
  j["single_letter_cases"] = region;
  j["quantize_and_bin_cases"] = qb;
  j["implied_by_B"] = implied;
  j["measured"] = measured;
  return j;
}

ojson demo_report_json(const DemoReport &r) {
  auto rows = [](const std::vector<DemoRow> &v) {
    ojson a = ojson::array();
    for (const auto &row : v) {
      ojson j;
      j["delta"] = num(row.delta);
      j["r_uv_min"] = num(row.corner.a);
      j["sum_rate_min"] = num(row.corner.b);
      j["gap"] = num(row.gap);
      j["limit_error"] = num(row.limit_error);
      a.push_back(j);
    }
    return a;
  };
  ojson j;
  j["rho"] = num(r.rho);
  j["D"] = num(r.D);
  j["rows"] = rows(r.rows);
  j["mirror_rows"] = rows(r.mirror_rows);
  j["limit"] = corner_json(r.limit);
  j["delta0_corner"] = corner_json(r.zero_corner);
  j["delta0_distortion"] = num(r.zero_distortion);
  j["delta1_corner"] = corner_json(r.one_corner);
  j["delta1_distortion"] = num(r.one_distortion);
  j["gap"] = num(r.gap);
  j["gap_positive"] = r.gap_positive;
  j["monotone_stable"] = r.monotone_stable;
  return j;
}

std::string demo_csv(const DemoReport &r) {
  std::string out = "delta,side,r_uv_min,sum_rate_min,gap\n";
  auto emit = [&](const std::vector<DemoRow> &rows, const char *side) {
    for (const auto &row : rows)
      out += format9(row.delta) + "," + side + "," + format9(row.corner.a) +
             "," + format9(row.corner.b) + "," + format9(row.gap) + "\n";
  };
  emit(r.rows, "near0");
  out += "0,degenerate," + format9(r.zero_corner.a) + "," +
         format9(r.zero_corner.b) + ",0\n";
  emit(r.mirror_rows, "near1");
  out += "1,degenerate," + format9(r.one_corner.a) + "," +
         format9(r.one_corner.b) + ",0\n";
  return out;
}

ojson prune_report_json(const PruneReport &r) {
  ojson j;
  j["method"] = std::string(1, r.method);
  j["delta"] = num(r.delta);
  j["eta"] = num(r.eta);
  j["m_S"] = num(r.m_s);
  j["size_S"] = r.size_s;
  j["l1"] = num(r.l1);
  j["kl_nats"] = num(r.kl_nats);
  j["dH_single"] = num(r.dh_single);
  j["dH_pair"] = num(r.dh_pair);
  if (r.method == 'a')
    j["inflation"] = num(r.inflation);
  else
    j["zeroing_cases"] = r.zeroing_cases;
  j["xi_at_delta"] = num(r.xi_at_delta);
  j["units"] = "kl and eta in nats; entropy deltas and their bounds in bits";
  ojson checks = ojson::array();
  for (const auto &c : r.checks) {
    ojson x;
    x["name"] = c.name;
    x["achieved"] = num(c.achieved);
    x["bound"] = num(c.bound);
    x["holds"] = c.holds;
    checks.push_back(x);
  }
  j["checks"] = checks;
  j["all_hold"] = r.all_hold();
  return j;
}

ojson triple_json(const TripleEvaluation &ev) {
  ojson j;
  j["corner_ddag"] = corner_json(ev.ddag);
  j["corner_dag"] = corner_json(ev.dag);
  j["achieved_distortion"] = num(ev.candidate.achieved_distortion);
  j["classes"] = ev.candidate.partition.class_count();
  j["feasible"] = ev.feasible;
  return j;
}

} // namespace crr
