#pragma once

#include <vector>

#include "nlc/geometry.hpp"
#include "nlc/linalg.hpp"
#include "nlc/nonlocal.hpp"

namespace nlc {

struct FemSystem {
  TriMesh mesh;
  double alpha = 1.0;
  SpMatC M;  // consistent mass
  SpMatC B;  // alpha-scaled stiffness
  std::vector<int> free_nodes, gamma_i, gamma_d;
  std::vector<int> free_pos;  // node -> position in free_nodes, -1 for constrained nodes
};

FemSystem assemble_fem(const TriMesh& mesh, double alpha, bool parallel = true);

// Element stiffness (alpha = 1) and mass of a single triangle.
Eigen::Matrix3d element_stiffness(const Vec2& a, const Vec2& b, const Vec2& c);
Eigen::Matrix3d element_mass(const Vec2& a, const Vec2& b, const Vec2& c);

// Load vector int f phi_i with the edge-midpoint rule (exact for quadratics).
Vec fem_load(const FemSystem& sys, const ScalarFn& f, double t);

class FemStepper {
 public:
  FemStepper(const FemSystem& sys, double dt);
  // u_prev holds all nodes at t_k; constrained holds the Dirichlet values at
  // t_{k+1} on gamma_i and gamma_d nodes (other entries ignored).
  Vec step(const Vec& u_prev, const ScalarFn& f, const Vec& constrained, double t_next) const;
  const SpMatC& free_block() const { return Aff_; }

 private:
  const FemSystem* sys_;
  double dt_;
  SpMatC Aff_, Afd_, Mff_, Mfd_;
  std::vector<int> dnodes_;
  SparseSPD solver_;
};

class PointLocator {
 public:
  explicit PointLocator(const TriMesh& mesh);
  // triangle containing x (tolerance relative to h), -1 if none
  int locate(const Vec2& x, double tol = 1e-10) const;
  std::vector<int> containing(const Vec2& x, double tol = 1e-10) const;
  const TriMesh& mesh() const { return *mesh_; }

 private:
  const TriMesh* mesh_;
  Vec2 lo_;
  double cell_ = 1.0;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> bins_;
};

Eigen::Vector3d barycentric(const TriMesh& m, int tri, const Vec2& x);
// gradients of the three hat functions on a triangle (rows)
Eigen::Matrix<double, 3, 2> hat_gradients(const TriMesh& m, int tri);

struct LocalEval {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
};

LocalEval evaluate_local(const TriMesh& mesh, const Vec& u, const Vec2& x);
LocalEval evaluate_local(const PointLocator& loc, const Vec& u, const Vec2& x);

// Row weights for dir . grad u_h at x, averaged over all elements containing x.
SparseRow element_gradient_row(const PointLocator& loc, const Vec2& x, const Vec2& dir);
SparseRow element_value_row(const PointLocator& loc, const Vec2& x);

double fem_l2_error(const FemSystem& sys, const Vec& e);

}  // namespace nlc
