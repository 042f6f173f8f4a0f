#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nlc/coupler.hpp"

namespace nlc {

struct DenseLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Implicit (L) and explicit (R) block matrices of one homogeneous coupled
// step, L s^k = R s^{k-1}, with s = [U_nl; U_l].
void lambda_blocks(const CoupledSystem& sys, SpMatC& L, SpMatC& R);

// Lambda = L^{-1} R, dense.
Mat build_lambda(const CoupledSystem& sys, int dense_limit = 4000);

// Indices whose rows of Lambda vanish identically (Dirichlet points and nodes).
std::vector<int> lambda_zero_rows(const CoupledSystem& sys);

// max |eig(Lambda)|, computed on the principal submatrix without the zero rows.
double amplification_factor(const CoupledSystem& sys, int dense_limit = 4000);

struct AmplificationReport {
  double h = 0, delta = 0, dt = 0;
  std::vector<double> beta, rho;
  double beta_star = 0, rho_star = 0;
  std::vector<double> crossings;
  std::string label;
};

using RhoFunction = std::function<double(double beta)>;

// Evaluate rho on a sorted grid; argmin with ties toward smaller beta.
AmplificationReport evaluate_grid(const RhoFunction& rho, std::vector<double> grid, bool parallel = true);

// Two-stage search: 25-point coarse grid {0} + geometric up to beta_max,
// then 25 linear points in the bracket around the coarse minimum.
AmplificationReport optimize_beta(const RhoFunction& rho, double beta_max, bool parallel = true,
                                  int coarse = 25, int fine = 25);

inline double scaled_beta(double beta0, double h0, double h) { return beta0 * h0 / h; }

// Observed per-step growth of the homogeneous iteration from a random start.
double power_growth(const CoupledSystem& sys, int steps, unsigned seed = 7);

std::string report_csv(const AmplificationReport& r);
std::string report_json(const AmplificationReport& r);

}  // namespace nlc
