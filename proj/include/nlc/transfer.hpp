#pragma once

#include "nlc/fem.hpp"
#include "nlc/nonlocal.hpp"

namespace nlc {

// How du_l/dn at the projection points is extracted from the local nodal values.
enum class GradientMode { mls, element };

struct TransferOperators {
  GradientMode mode = GradientMode::mls;
  SpMat Gn;      // slots x local nodes, beta-independent part
  SpMat Gt;      // slots x local nodes, multiplied by beta
  SpMat Sigma1;  // nonlocal rows x slots
  SpMat Sigma2;  // local nodes x nonlocal points (nonzero rows only on gamma_i nodes)
  double g_radius = 0.0;
  double sigma2_radius = 0.0;
  int sigma2_grown = 0;  // number of gamma_i rows that needed the enlarged radius

  // Robin data per slot: (Gn + beta Gt) u_l
  Vec robin_data(const Vec& ul, double beta) const { return Gn * ul + beta * (Gt * ul); }
};

// G-maps: for value slots Gn = d/dn, Gt = value; for tangential slots
// Gn = n^T Hess p, Gt = d/dp (always from the MLS polynomial).
void build_robin_extraction(const NonlocalSystem& nl, const FemSystem& fem, GradientMode mode,
                            TransferOperators& out, bool parallel = true);
void build_dirichlet_trace(const NonlocalSystem& nl, const FemSystem& fem, TransferOperators& out,
                           bool parallel = true);
SpMat build_sigma1(const NonlocalSystem& nl);

TransferOperators build_transfer(const NonlocalSystem& nl, const FemSystem& fem, GradientMode mode,
                                 bool parallel = true);

}  // namespace nlc
