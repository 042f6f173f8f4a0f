#pragma once

#include <string>
#include <vector>

#include "nlc/coupler.hpp"
#include "nlc/geometry.hpp"
#include "nlc/nonlocal.hpp"

namespace nlc {

struct ManufacturedCase {
  std::string id, variant;
  bool coupled = false;
  DomainSpec domain;          // nonlocal side
  LocalDomain local;          // used when coupled
  double alpha_nl = 1.0, alpha_l = 1.0;
  AnalyticField u0;           // local limit of the nonlocal solution
  AnalyticField ul;           // local exact solution (coupled cases)
  ScalarFn f_nl, f_l;
  double ratio = 3.9;         // delta / h
  double dt_coef = 100.0;     // dt = dt_coef h^2
  double T = 1.0;
  double beta_h = 0.0;        // default beta = beta_h / h
  std::string note;

  ScalarFn uD_nl() const { return u0.u; }
  CoupledData coupled_data() const;
};

// Known ids: bc-square, bc-circle, bc-cross, ltn-line, ltn-circle, ltn-cross,
// patch-linear, patch-quadratic, ltn-patch-linear, ltn-patch-quadratic.
// Variants: homogeneous, heteroA, heteroB (coupled tests only).
ManufacturedCase registry_case(const std::string& id, const std::string& variant = "homogeneous");
std::vector<std::pair<std::string, std::string>> case_list();

// Field builders
AnalyticField field_sincos(int tpow);  // t^tpow sin x cos y
AnalyticField field_poly_x(int p);     // x^p (steady), p = 1 or 2

}  // namespace nlc
