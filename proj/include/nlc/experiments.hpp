#pragma once

#include <string>
#include <vector>

#include "nlc/cases.hpp"
#include "nlc/coupler.hpp"
#include "nlc/stability.hpp"

namespace nlc {

struct BetaRule {
  enum class Kind { zero, constant, over_h };
  Kind kind = Kind::zero;
  double c = 0.0;
  double eval(double h) const { return kind == Kind::zero ? 0.0 : kind == Kind::constant ? c : c / h; }
  // "0", "10", "3/h", "0.3/h"
  static BetaRule parse(const std::string& s);
  std::string str() const;
};

struct RunOptions {
  double ratio = 0.0;    // 0: the case default
  double dt_coef = 0.0;  // 0: the case default
  double T = -1.0;       // < 0: the case default
  int steps = -1;        // > 0 overrides T
  GradientMode mode = GradientMode::mls;
  KernelFamily kernel = KernelFamily::J1_constant;
  bool parallel = true;
  std::string snapshot_dir;  // optional x,y,u snapshots at the final time
};

struct StandaloneReport {
  double h = 0, delta = 0, dt = 0, beta = 0;
  double err_inf = 0, err_l2 = 0;
  bool diverged = false;
  int steps = 0;
  Vec u;
};

StandaloneReport run_standalone(const ManufacturedCase& c, double h, double beta, const RunOptions& o = {});

CoupledSystem build_coupled_system(const ManufacturedCase& c, double h, double beta, const RunOptions& o = {});
RunReport run_coupled_case(const ManufacturedCase& c, double h, double beta, const RunOptions& o = {});

struct ConvergenceRow {
  double h = 0, delta = 0, dt = 0, beta = 0;
  double err_inf_nl = 0, err_l2_nl = 0, err_inf_l = 0, err_l2_l = 0;
  bool diverged = false;
  double rate_inf_nl = NAN, rate_l2_nl = NAN, rate_inf_l = NAN, rate_l2_l = NAN;
};

struct ConvergenceTable {
  std::string label;
  std::vector<ConvergenceRow> rows;
  double slope_inf_nl = NAN, slope_l2_nl = NAN, slope_inf_l = NAN, slope_l2_l = NAN;
  bool any_diverged() const;
  std::string csv() const;
};

// Least squares slope of log10(err) against log10(h), skipping non-finite rows.
double fit_slope(const std::vector<double>& h, const std::vector<double>& err);

ConvergenceTable run_convergence(const ManufacturedCase& c, const std::vector<double>& hs, const BetaRule& beta,
                                 const RunOptions& o = {});

AmplificationReport run_stability_sweep(const ManufacturedCase& c, double h, const RunOptions& o = {},
                                        double beta_max = -1.0, int dense_limit = 4000);

double case_dt(const ManufacturedCase& c, double h, const RunOptions& o);
double case_ratio(const ManufacturedCase& c, const RunOptions& o);

}  // namespace nlc
