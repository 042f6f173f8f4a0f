#pragma once

#include <optional>
#include <string>

#include "nlc/fem.hpp"
#include "nlc/nonlocal.hpp"
#include "nlc/transfer.hpp"

namespace nlc {

// Data of a coupled manufactured problem.
struct CoupledData {
  ScalarFn f_nl, f_l;
  ScalarFn uD_nl, uD_l;    // nonlocal Dirichlet points, local gamma_d nodes
  ScalarFn uIC_nl, uIC_l;
  ScalarFn exact_nl, exact_l;  // analytic limits used for the error report
};

struct CoupledSystem {
  NonlocalSystem nl;
  FemSystem fem;
  TransferOperators tr;
  double beta = 0.0, dt = 0.0;
};

struct CoupledState {
  Vec u_nl, u_l;
  double t = 0.0;
  int k = 0;
};

class CoupledSolver {
 public:
  explicit CoupledSolver(const CoupledSystem& sys);
  // steps (a)-(d); data may be null for the homogeneous problem
  CoupledState step(const CoupledState& s, const CoupledData* data) const;
  const CoupledSystem& system() const { return *sys_; }

 private:
  const CoupledSystem* sys_;
  NonlocalStepper nl_;
  FemStepper fem_;
};

struct RunReport {
  double h = 0, delta = 0, dt = 0, beta = 0;
  double err_inf_nl = 0, err_inf_l = 0, err_l2_nl = 0, err_l2_l = 0;
  bool diverged = false;
  int first_bad_step = -1;
  int steps = 0;
  CoupledState final_state;
};

RunReport run_coupled(const CoupledSystem& sys, const CoupledData& data, double T, double blowup = 1e12);

// Cloud L2: sqrt(sum e_i^2 h^2) over non-Dirichlet points.
double cloud_l2(const NonlocalSystem& nl, const Vec& e);

std::string run_csv_header();
std::string run_csv_row(const RunReport& r);

}  // namespace nlc
