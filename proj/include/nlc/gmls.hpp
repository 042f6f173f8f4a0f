#pragma once

#include <vector>

#include "nlc/geometry.hpp"
#include "nlc/kernels.hpp"

namespace nlc {

using Vec6 = Eigen::Matrix<double, 6, 1>;

struct UnisolvencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Quadratic basis 1, z1, z2, z1^2, z1 z2, z2^2 with z = (y - origin) / scale.
Vec6 basis(const Vec2& y, const Vec2& origin, double scale);

inline double gmls_weight(double r, double radius) {
  if (r >= radius) return 0.0;
  double t = 1.0 - r / radius;
  return t * t * t * t;
}

// Weighted least-squares map from nodal values on `idx` to basis coefficients.
struct Reconstruction {
  Vec2 origin;
  double scale = 1.0;
  std::vector<int> idx;
  std::vector<double> weights;
  Eigen::Matrix<double, 6, Eigen::Dynamic> C;
  double cond = 1.0;

  // nodal weights w such that sum_j w_j u_j = b . coefficients
  std::vector<double> row(const Vec6& b) const;
  Vec6 coefficients(const std::vector<double>& values_on_idx) const;
};

Reconstruction build_reconstruction(const std::vector<Vec2>& pts, const std::vector<int>& idx, const Vec2& origin,
                                    double scale, double radius);

struct Stencil {
  int center = -1;
  std::vector<int> nbrs;
  std::vector<double> weights;
  double cond = 1.0;
  Reconstruction recon;
};

// Neighbors |x_i - x_j| < delta, basis order m (only m = 2 is supported).
Stencil build_stencil(const PointCloud& cloud, const PointIndex& index, int i, int m = 2);

// coefficient-space functionals
Vec6 functional_value(const Vec2& x, const Vec2& origin, double scale);
Vec6 functional_gradient(const Vec2& x, const Vec2& dir, const Vec2& origin, double scale);
Vec6 functional_hessian(const Vec2& a, const Vec2& b, double scale);  // a^T Hess b
// 2 int_region J (R(y) - R(x)) dy from raw region moments about x = origin
Vec6 functional_moments(const Moments& m, double scale);
// [u]_pp through 2 int H_delta(|l|)(R(x_l) - R(x)) dl along the level-set contour
Vec6 functional_contour(const BoundaryProjection& bp, const ContourKernelSpec& ck, const Vec2& origin,
                        double scale);

struct SparseRow {
  std::vector<int> cols;
  std::vector<double> vals;
  double dot(const std::vector<double>& u) const {
    double s = 0;
    for (size_t k = 0; k < cols.size(); ++k) s += vals[k] * u[cols[k]];
    return s;
  }
};

SparseRow quadrature_row_interior(const Stencil& st, const Moments& region_moments);
SparseRow quadrature_row_contour(const Stencil& st, const ContourKernelSpec& ck, const BoundaryProjection& bp);

// MLS at an arbitrary point: value, gradient and Hessian weights over nearby points.
struct MlsRow {
  Reconstruction recon;
  SparseRow value() const;
  SparseRow derivative(const Vec2& dir) const;
  SparseRow second(const Vec2& a, const Vec2& b) const;
};

MlsRow mls_row(const std::vector<Vec2>& pts, const PointIndex& index, const Vec2& x, double radius,
               const std::vector<char>* allowed = nullptr);

// Convenience: MLS value (and gradient) at x from samples.
double mls_evaluate(const std::vector<Vec2>& pts, const std::vector<double>& values, const Vec2& x, double radius,
                    Vec2* grad = nullptr);

}  // namespace nlc
