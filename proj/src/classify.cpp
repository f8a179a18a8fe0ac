#include "crr/classify.hpp"

#include <algorithm>

#include "crr/gacs_korner.hpp"

namespace crr {

CaseReport classify_source(const SourceSpec &src, double tol) {
  const JointPmf &p = src.pmf();
  CaseReport r;
  r.i_s_v_given_u = conditional_mutual_information(p, {"S"}, {"V"}, {"U"});
  r.i_s_u_given_v = conditional_mutual_information(p, {"S"}, {"U"}, {"V"});
  r.h_s_given_u = conditional_entropy(p, {"S"}, {"U"});
  r.h_s_given_v = conditional_entropy(p, {"S"}, {"V"});
  r.h_u_given_v = conditional_entropy(p, {"U"}, {"V"});
  r.h_u_given_s = conditional_entropy(p, {"U"}, {"S"});
  r.h_v_given_s = conditional_entropy(p, {"V"}, {"S"});
  const JointPmf uv = marginalize(p, {"U", "V"});
  r.h_gk_uv = entropy(gk_variable(gk_partition(uv, {"U"}, {"V"})), {"GK"});
  r.support_s_uv_product = support_product_check(p, {"S"}, {"U", "V"});
  r.support_s_u_product =
      support_product_check(marginalize(p, {"S", "U"}), {"S"}, {"U"});
  r.support_u_v_product = support_product_check(uv, {"U"}, {"V"});

  const bool s_u_v = r.i_s_v_given_u <= tol;
  const bool s_v_u = r.i_s_u_given_v <= tol;
  r.case_a = r.support_s_uv_product;
  r.case_b = s_v_u;
  r.case_c = s_u_v && r.support_s_u_product;
  r.case_d = r.h_s_given_u <= tol;
  r.case_e = s_u_v && r.support_u_v_product;
  r.case_f = std::min(r.h_u_given_s, r.h_v_given_s) <= tol;
  r.qb_a = r.case_a && r.h_gk_uv <= tol;
  r.qb_b = r.case_e;
  r.qb_c = r.case_f;
  r.h_s_given_v_zero = r.h_s_given_v <= tol;
  r.h_u_given_v_zero = r.h_u_given_v <= tol;
  return r;
}

} // namespace crr
