#include "nlc/gmls.hpp"

#include <cmath>
#include <iostream>

namespace nlc {

Vec6 basis(const Vec2& y, const Vec2& origin, double scale) {
  Vec2 z = (y - origin) / scale;
  Vec6 b;
  b << 1.0, z.x(), z.y(), z.x() * z.x(), z.x() * z.y(), z.y() * z.y();
  return b;
}

std::vector<double> Reconstruction::row(const Vec6& b) const {
  Eigen::VectorXd w = C.transpose() * b;
  return std::vector<double>(w.data(), w.data() + w.size());
}

Vec6 Reconstruction::coefficients(const std::vector<double>& v) const {
  Eigen::Map<const Eigen::VectorXd> u(v.data(), static_cast<Eigen::Index>(v.size()));
  return C * u;
}

Reconstruction build_reconstruction(const std::vector<Vec2>& pts, const std::vector<int>& idx, const Vec2& origin,
                                    double scale, double radius) {
  Reconstruction rc;
  rc.origin = origin;
  rc.scale = scale;
  rc.idx = idx;
  const int n = static_cast<int>(idx.size());
  if (n < 6) throw UnisolvencyError("stencil has " + std::to_string(n) + " points, need 6");
  Eigen::MatrixXd A(n, 6);
  Eigen::VectorXd sw(n);
  rc.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    double w = gmls_weight((pts[idx[k]] - origin).norm(), radius);
    rc.weights[k] = w;
    sw[k] = std::sqrt(w);
    A.row(k) = sw[k] * basis(pts[idx[k]], origin, scale).transpose();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < 6) throw UnisolvencyError("stencil is not unisolvent for quadratics");
  auto R = qr.matrixR();
  double dmax = std::abs(R(0, 0)), dmin = std::abs(R(5, 5));
  rc.cond = dmin > 0 ? dmax / dmin : INFINITY;
  Eigen::MatrixXd B = sw.asDiagonal();
  rc.C = qr.solve(B);
  return rc;
}

Stencil build_stencil(const PointCloud& cloud, const PointIndex& index, int i, int m) {
  if (m != 2) throw std::invalid_argument("only quadratic reconstruction (m = 2) is supported");
  Stencil st;
  st.center = i;
  const Vec2& x = cloud.points[i];
  st.nbrs = index.query(x, cloud.delta);
  st.recon = build_reconstruction(cloud.points, st.nbrs, x, cloud.delta, cloud.delta);
  st.weights = st.recon.weights;
  st.cond = st.recon.cond;
  if (st.cond > 1e8)
    std::cerr << "warning: GMLS stencil at point " << i << " has condition estimate " << st.cond << "\n";
  return st;
}

Vec6 functional_value(const Vec2& x, const Vec2& origin, double scale) { return basis(x, origin, scale); }

Vec6 functional_gradient(const Vec2& x, const Vec2& dir, const Vec2& origin, double scale) {
  Vec2 z = (x - origin) / scale;
  Vec6 b;
  b << 0.0, dir.x(), dir.y(), 2 * z.x() * dir.x(), z.y() * dir.x() + z.x() * dir.y(), 2 * z.y() * dir.y();
  return b / scale;
}

Vec6 functional_hessian(const Vec2& a, const Vec2& b, double scale) {
  Vec6 f;
  f << 0.0, 0.0, 0.0, 2 * a.x() * b.x(), a.x() * b.y() + a.y() * b.x(), 2 * a.y() * b.y();
  return f / (scale * scale);
}

Vec6 functional_moments(const Moments& m, double scale) {
  Vec6 b;
  b << 0.0, m.m1.x() / scale, m.m1.y() / scale, m.m2(0, 0) / (scale * scale), m.m2(0, 1) / (scale * scale),
      m.m2(1, 1) / (scale * scale);
  return 2.0 * b;
}

Vec6 functional_contour(const BoundaryProjection& bp, const ContourKernelSpec& ck, const Vec2& origin,
                        double scale) {
  if (!bp.arc) return functional_hessian(bp.p, bp.p, scale);
  // curved contour: 16-point Gauss-Legendre on each half of [-delta, delta]
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(16, gx, gw);
  const double d = ck.delta;
  Vec6 acc = Vec6::Zero();
  Vec6 b0 = basis(bp.x, origin, scale);
  for (int half = 0; half < 2; ++half) {
    double sign = half == 0 ? 1.0 : -1.0;
    for (size_t q = 0; q < gx.size(); ++q) {
      double l = 0.5 * d * (gx[q] + 1.0);
      double w = 0.5 * d * gw[q] * eval_h(ck, l);
      acc += w * (basis(contour_point(bp, sign * l), origin, scale) - b0);
    }
  }
  return 2.0 * acc;
}

static SparseRow to_row(const Reconstruction& rc, const Vec6& b) {
  SparseRow r;
  r.cols = rc.idx;
  r.vals = rc.row(b);
  return r;
}

SparseRow quadrature_row_interior(const Stencil& st, const Moments& mom) {
  return to_row(st.recon, functional_moments(mom, st.recon.scale));
}

SparseRow quadrature_row_contour(const Stencil& st, const ContourKernelSpec& ck, const BoundaryProjection& bp) {
  return to_row(st.recon, functional_contour(bp, ck, st.recon.origin, st.recon.scale));
}

SparseRow MlsRow::value() const { return to_row(recon, basis(recon.origin, recon.origin, recon.scale)); }
SparseRow MlsRow::derivative(const Vec2& dir) const {
  return to_row(recon, functional_gradient(recon.origin, dir, recon.origin, recon.scale));
}
SparseRow MlsRow::second(const Vec2& a, const Vec2& b) const {
  return to_row(recon, functional_hessian(a, b, recon.scale));
}

MlsRow mls_row(const std::vector<Vec2>& pts, const PointIndex& index, const Vec2& x, double radius,
               const std::vector<char>* allowed) {
  std::vector<int> idx = index.query(x, radius);
  if (allowed) {
    std::vector<int> kept;
    for (int j : idx)
      if ((*allowed)[j]) kept.push_back(j);
    idx.swap(kept);
  }
  MlsRow r;
  r.recon = build_reconstruction(pts, idx, x, radius, radius);
  return r;
}

double mls_evaluate(const std::vector<Vec2>& pts, const std::vector<double>& values, const Vec2& x, double radius,
                    Vec2* grad) {
  PointIndex index(pts, radius);
  MlsRow r = mls_row(pts, index, x, radius);
  double v = r.value().dot(values);
  if (grad) *grad = {r.derivative({1, 0}).dot(values), r.derivative({0, 1}).dot(values)};
  return v;
}

}  // namespace nlc
