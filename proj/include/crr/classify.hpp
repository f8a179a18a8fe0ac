#pragma once

#include "crr/source.hpp"

namespace crr {

/// Structural conditions under which the region is known in closed form, and
/// under which quantize-and-bin is optimal.
struct CaseReport {
  // Measured quantities (bits).
  double i_s_v_given_u = 0.0; // S - U - V iff zero
  double i_s_u_given_v = 0.0; // S - V - U iff zero
  double h_s_given_u = 0.0;
  double h_s_given_v = 0.0;
  double h_u_given_v = 0.0;
  double h_u_given_s = 0.0;
  double h_v_given_s = 0.0;
  double h_gk_uv = 0.0;
  bool support_s_uv_product = false;
  bool support_s_u_product = false;
  bool support_u_v_product = false;

  // Region equals the single-auxiliary region.
  bool case_a = false; // supp(S,U,V) = supp(S) x supp(U,V)
  bool case_b = false; // S - V - U
  bool case_c = false; // S - U - V and supp(S,U) = supp(S) x supp(U)
  bool case_d = false; // H(S|U) = 0
  bool case_e = false; // S - U - V and supp(U,V) = supp(U) x supp(V)
  bool case_f = false; // min{H(U|S), H(V|S)} = 0

  // Quantize-and-bin is optimal.
  bool qb_a = false; // case_a and H(GK^{U,V}) = 0
  bool qb_b = false; // case_e
  bool qb_c = false; // case_f

  // Conditions implied by case_b.
  bool h_s_given_v_zero = false;
  bool h_u_given_v_zero = false;
};

CaseReport classify_source(const SourceSpec &src, double tol = kInfoTol);

} // namespace crr
