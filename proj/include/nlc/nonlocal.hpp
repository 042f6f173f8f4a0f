#pragma once

#include <functional>
#include <vector>

#include "nlc/geometry.hpp"
#include "nlc/gmls.hpp"
#include "nlc/kernels.hpp"
#include "nlc/linalg.hpp"

namespace nlc {

using ScalarFn = std::function<double(const Vec2&, double)>;

// Analytic space-time field with derivatives, used for manufactured data.
struct AnalyticField {
  ScalarFn u;
  std::function<Vec2(const Vec2&, double)> grad;
  std::function<Mat2(const Vec2&, double)> hess;
  ScalarFn ut;
};

struct CollarCoefficients {
  double Q = 1.0, V = 0.0, M = 0.0;
  bool corner = false;
  // corner variant (reported values follow the d-frame definitions)
  double Qc = 1.0, D1 = 0.0, D2 = 0.0, E12 = 0.0, theta = 0.0;
  // quantities entering the corner row
  int frame = 0;            // 0: contour along p1, 1: along p2
  double mass = 1.0;        // 1 - K_nn
  double diffusion = 0.0;   // K_pp - K_nn
  double cross = 0.0;       // K_np
  double md1 = 0.0, md2 = 0.0;
};

// Raw moments of J over B(x, delta) minus the data region.
Moments exterior_moments(const DomainSpec& dom, const KernelSpec& k, const Vec2& x);

CollarCoefficients compute_collar_coefficients(const BoundaryProjection& bp, const DomainSpec& dom,
                                               const KernelSpec& k);
CollarCoefficients compute_corner_coefficients(const BoundaryProjection& bp, const DomainSpec& dom,
                                               const KernelSpec& k);

// One piece of Robin data entering a collar row: weight * g(point) for value
// slots, weight * dg/dp(point) for tangential slots.
struct RobinSlot {
  enum class Kind { value, tangential };
  int row = -1;
  double weight = 0.0;
  Vec2 point, normal, tangent;
  Kind kind = Kind::value;
};

struct NonlocalSystem {
  PointCloud cloud;
  DomainSpec domain;
  KernelSpec kernel;
  double alpha = 1.0;
  std::vector<char> dirichlet;
  std::vector<double> mass;   // lumped: 1 interior, Q on the collar, 0 on Dirichlet rows
  std::vector<double> fcoef;  // coefficient of f in the load
  SpMat K;                    // stiffness (Dirichlet rows empty)
  SpMat S;                    // Robin trace block; the operator is K + beta S
  std::vector<RobinSlot> slots;
  std::vector<int> collar;    // indices of collar_interface points
  std::vector<BoundaryProjection> proj;      // per collar point
  std::vector<CollarCoefficients> coef;      // per collar point
  std::vector<double> max_cond;

  int size() const { return static_cast<int>(cloud.size()); }
};

NonlocalSystem assemble_nonlocal(const PointCloud& cloud, const DomainSpec& dom, const KernelSpec& k, double alpha,
                                 bool parallel = true);

// Robin data per slot from an analytic local limit: g = beta u + du/dn, and dg/dp.
Vec slot_data_analytic(const NonlocalSystem& sys, const AnalyticField& u0, double t, double beta);

// Load without the mass/dt history term; Dirichlet rows carry uD.
Vec assemble_rhs(const NonlocalSystem& sys, const ScalarFn& f, const ScalarFn& uD, const Vec& slot_data, double t);

// Backward-Euler operator diag(mass)/dt + K + beta S with identity Dirichlet rows.
SpMatC nonlocal_operator(const NonlocalSystem& sys, double beta, double dt);

class NonlocalStepper {
 public:
  NonlocalStepper(const NonlocalSystem& sys, double beta, double dt);
  Vec step(const Vec& u, const ScalarFn& f, const ScalarFn& uD, const Vec& slot_data, double t_next) const;
  const SpMatC& matrix() const { return A_; }

 private:
  const NonlocalSystem* sys_;
  double dt_;
  SpMatC A_;
  SparseLU lu_;
};

Vec sample(const std::vector<Vec2>& pts, const ScalarFn& f, double t);

void write_snapshot_csv(const std::string& path, const std::vector<Vec2>& pts, const Vec& u);

}  // namespace nlc
