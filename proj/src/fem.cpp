#include "nlc/fem.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <map>

namespace nlc {

Eigen::Matrix3d element_stiffness(const Vec2& a, const Vec2& b, const Vec2& c) {
  double area2 = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  Eigen::Matrix<double, 3, 2> g;
  // hat gradients: rotate the opposite edge
  Vec2 e0 = c - b, e1 = a - c, e2 = b - a;
  g.row(0) << -e0.y(), e0.x();
  g.row(1) << -e1.y(), e1.x();
  g.row(2) << -e2.y(), e2.x();
  g /= area2;
  return 0.5 * std::abs(area2) * g * g.transpose();
}

Eigen::Matrix3d element_mass(const Vec2& a, const Vec2& b, const Vec2& c) {
  double area = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
  Eigen::Matrix3d m;
  m << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  return area / 12.0 * m;
}

FemSystem assemble_fem(const TriMesh& mesh, double alpha, bool parallel) {
  FemSystem sys;
  sys.mesh = mesh;
  sys.alpha = alpha;
  const int nn = static_cast<int>(mesh.nodes.size());
  const int nt = static_cast<int>(mesh.tris.size());
  std::vector<Eigen::Matrix3d> ke(nt), me(nt);
  std::exception_ptr err;
#pragma omp parallel for if (parallel)
  for (int t = 0; t < nt; ++t) {
    const auto& tr = mesh.tris[t];
    if (!(mesh.area(t) > 1e-12 * mesh.h * mesh.h)) {
#pragma omp critical(fem_assembly_error)
      if (!err)
        err = std::make_exception_ptr(GeometryError("degenerate element " + std::to_string(t)));
      continue;
    }
    ke[t] = alpha * element_stiffness(mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]);
    me[t] = element_mass(mesh.nodes[tr[0]], mesh.nodes[tr[1]], mesh.nodes[tr[2]]);
  }
  if (err) std::rethrow_exception(err);
  std::vector<Triplet> tk, tm;
  tk.reserve(9 * nt);
  tm.reserve(9 * nt);
  for (int t = 0; t < nt; ++t)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        tk.emplace_back(mesh.tris[t][a], mesh.tris[t][b], ke[t](a, b));
        tm.emplace_back(mesh.tris[t][a], mesh.tris[t][b], me[t](a, b));
      }
  sys.B.resize(nn, nn);
  sys.M.resize(nn, nn);
  sys.B.setFromTriplets(tk.begin(), tk.end());
  sys.M.setFromTriplets(tm.begin(), tm.end());
  sys.free_pos.assign(nn, -1);
  for (int i = 0; i < nn; ++i) {
    switch (mesh.tags[i]) {
      case NodeTag::interior:
        sys.free_pos[i] = static_cast<int>(sys.free_nodes.size());
        sys.free_nodes.push_back(i);
        break;
      case NodeTag::gamma_i:
        sys.gamma_i.push_back(i);
        break;
      case NodeTag::gamma_d:
        sys.gamma_d.push_back(i);
        break;
    }
  }
  return sys;
}

Vec fem_load(const FemSystem& sys, const ScalarFn& f, double t) {
  const auto& m = sys.mesh;
  Vec F = Vec::Zero(m.nodes.size());
  if (!f) return F;
  for (size_t e = 0; e < m.tris.size(); ++e) {
    const auto& tr = m.tris[e];
    const Vec2 &a = m.nodes[tr[0]], &b = m.nodes[tr[1]], &c = m.nodes[tr[2]];
    double area = std::abs(m.area(static_cast<int>(e)));
    double fab = f(0.5 * (a + b), t), fbc = f(0.5 * (b + c), t), fca = f(0.5 * (c + a), t);
    // phi_a = 1/2 at the midpoints of its two edges
    F[tr[0]] += area / 3.0 * 0.5 * (fab + fca);
    F[tr[1]] += area / 3.0 * 0.5 * (fab + fbc);
    F[tr[2]] += area / 3.0 * 0.5 * (fbc + fca);
  }
  return F;
}

namespace {
SpMatC extract(const SpMatC& A, const std::vector<int>& rows, const std::vector<int>& cols, int ncols_total) {
  std::vector<int> rpos(A.rows(), -1), cpos(ncols_total, -1);
  for (size_t k = 0; k < rows.size(); ++k) rpos[rows[k]] = static_cast<int>(k);
  for (size_t k = 0; k < cols.size(); ++k) cpos[cols[k]] = static_cast<int>(k);
  std::vector<Triplet> t;
  for (int j = 0; j < A.outerSize(); ++j) {
    if (cpos[j] < 0) continue;
    for (SpMatC::InnerIterator it(A, j); it; ++it)
      if (rpos[it.row()] >= 0) t.emplace_back(rpos[it.row()], cpos[j], it.value());
  }
  SpMatC S(rows.size(), cols.size());
  S.setFromTriplets(t.begin(), t.end());
  return S;
}
}  // namespace

FemStepper::FemStepper(const FemSystem& sys, double dt) : sys_(&sys), dt_(dt) {
  dnodes_ = sys.gamma_i;
  dnodes_.insert(dnodes_.end(), sys.gamma_d.begin(), sys.gamma_d.end());
  const int nn = static_cast<int>(sys.mesh.nodes.size());
  SpMatC A = SpMatC(sys.M / dt) + sys.B;
  Aff_ = extract(A, sys.free_nodes, sys.free_nodes, nn);
  Afd_ = extract(A, sys.free_nodes, dnodes_, nn);
  Mff_ = extract(sys.M, sys.free_nodes, sys.free_nodes, nn);
  Mfd_ = extract(sys.M, sys.free_nodes, dnodes_, nn);
  solver_.factor(Aff_);
}

Vec FemStepper::step(const Vec& u_prev, const ScalarFn& f, const Vec& constrained, double t_next) const {
  const auto& s = *sys_;
  const int nf = static_cast<int>(s.free_nodes.size()), nd = static_cast<int>(dnodes_.size());
  Vec F = fem_load(s, f, t_next);
  Vec uf(nf), ff(nf), ud_prev(nd), ud(nd);
  for (int k = 0; k < nf; ++k) {
    uf[k] = u_prev[s.free_nodes[k]];
    ff[k] = F[s.free_nodes[k]];
  }
  for (int k = 0; k < nd; ++k) {
    ud_prev[k] = u_prev[dnodes_[k]];
    ud[k] = constrained[dnodes_[k]];
  }
  Vec rhs = ff + (Mff_ * uf + Mfd_ * ud_prev) / dt_ - Afd_ * ud;
  Vec x = solver_.solve(rhs);
  Vec out = u_prev;
  for (int k = 0; k < nf; ++k) out[s.free_nodes[k]] = x[k];
  for (int k = 0; k < nd; ++k) out[dnodes_[k]] = ud[k];
  return out;
}

PointLocator::PointLocator(const TriMesh& mesh) : mesh_(&mesh) {
  Vec2 lo(INFINITY, INFINITY), hi(-INFINITY, -INFINITY);
  for (auto& p : mesh.nodes) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  cell_ = std::max(mesh.h, 1e-12) * 2.0;
  lo_ = lo;
  nx_ = static_cast<int>((hi.x() - lo.x()) / cell_) + 1;
  ny_ = static_cast<int>((hi.y() - lo.y()) / cell_) + 1;
  bins_.assign(static_cast<size_t>(nx_) * ny_, {});
  for (int t = 0; t < static_cast<int>(mesh.tris.size()); ++t) {
    Vec2 a = mesh.nodes[mesh.tris[t][0]], b = a;
    for (int k = 1; k < 3; ++k) {
      a = a.cwiseMin(mesh.nodes[mesh.tris[t][k]]);
      b = b.cwiseMax(mesh.nodes[mesh.tris[t][k]]);
    }
    int i0 = std::max(0, static_cast<int>((a.x() - lo_.x()) / cell_) - 1);
    int i1 = std::min(nx_ - 1, static_cast<int>((b.x() - lo_.x()) / cell_) + 1);
    int j0 = std::max(0, static_cast<int>((a.y() - lo_.y()) / cell_) - 1);
    int j1 = std::min(ny_ - 1, static_cast<int>((b.y() - lo_.y()) / cell_) + 1);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) bins_[static_cast<size_t>(j) * nx_ + i].push_back(t);
  }
}

Eigen::Vector3d barycentric(const TriMesh& m, int tri, const Vec2& x) {
  const Vec2 &a = m.nodes[m.tris[tri][0]], &b = m.nodes[m.tris[tri][1]], &c = m.nodes[m.tris[tri][2]];
  Mat2 T;
  T.col(0) = b - a;
  T.col(1) = c - a;
  Vec2 l = T.inverse() * (x - a);
  return {1.0 - l.x() - l.y(), l.x(), l.y()};
}

Eigen::Matrix<double, 3, 2> hat_gradients(const TriMesh& m, int tri) {
  const Vec2 &a = m.nodes[m.tris[tri][0]], &b = m.nodes[m.tris[tri][1]], &c = m.nodes[m.tris[tri][2]];
  Mat2 T;
  T.col(0) = b - a;
  T.col(1) = c - a;
  Mat2 Ti = T.inverse();
  Eigen::Matrix<double, 3, 2> g;
  g.row(1) = Ti.row(0);
  g.row(2) = Ti.row(1);
  g.row(0) = -g.row(1) - g.row(2);
  return g;
}

std::vector<int> PointLocator::containing(const Vec2& x, double tol) const {
  std::vector<int> out;
  int i = static_cast<int>(std::floor((x.x() - lo_.x()) / cell_));
  int j = static_cast<int>(std::floor((x.y() - lo_.y()) / cell_));
  auto test = [&](int t) {
    Eigen::Vector3d l = barycentric(*mesh_, t, x);
    if (l.minCoeff() >= -tol) out.push_back(t);
  };
  if (i >= 0 && j >= 0 && i < nx_ && j < ny_) {
    for (int t : bins_[static_cast<size_t>(j) * nx_ + i]) test(t);
  } else {
    for (int t = 0; t < static_cast<int>(mesh_->tris.size()); ++t) test(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int PointLocator::locate(const Vec2& x, double tol) const {
  auto c = containing(x, tol);
  return c.empty() ? -1 : c.front();
}

LocalEval evaluate_local(const PointLocator& loc, const Vec& u, const Vec2& x) {
  int t = loc.locate(x);
  if (t < 0) throw GeometryError("evaluate_local: point outside the mesh");
  const auto& m = loc.mesh();
  Eigen::Vector3d l = barycentric(m, t, x);
  auto g = hat_gradients(m, t);
  LocalEval e;
  for (int k = 0; k < 3; ++k) {
    double uk = u[m.tris[t][k]];
    e.value += l[k] * uk;
    e.grad += uk * g.row(k).transpose();
  }
  return e;
}

LocalEval evaluate_local(const TriMesh& mesh, const Vec& u, const Vec2& x) {
  PointLocator loc(mesh);
  return evaluate_local(loc, u, x);
}

SparseRow element_gradient_row(const PointLocator& loc, const Vec2& x, const Vec2& dir) {
  auto tris = loc.containing(x);
  if (tris.empty()) throw GeometryError("element gradient: point outside the mesh");
  const auto& m = loc.mesh();
  std::map<int, double> acc;
  for (int t : tris) {
    auto g = hat_gradients(m, t);
    for (int k = 0; k < 3; ++k) acc[m.tris[t][k]] += g.row(k).dot(dir) / tris.size();
  }
  SparseRow r;
  for (auto& [j, v] : acc) {
    r.cols.push_back(j);
    r.vals.push_back(v);
  }
  return r;
}

SparseRow element_value_row(const PointLocator& loc, const Vec2& x) {
  int t = loc.locate(x);
  if (t < 0) throw GeometryError("element value: point outside the mesh");
  const auto& m = loc.mesh();
  Eigen::Vector3d l = barycentric(m, t, x);
  SparseRow r;
  for (int k = 0; k < 3; ++k) {
    r.cols.push_back(m.tris[t][k]);
    r.vals.push_back(l[k]);
  }
  return r;
}

double fem_l2_error(const FemSystem& sys, const Vec& e) { return std::sqrt(std::max(0.0, e.dot(sys.M * e))); }

}  // namespace nlc
