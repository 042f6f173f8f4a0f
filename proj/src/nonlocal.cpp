#include "nlc/nonlocal.hpp"

#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>

namespace nlc {

Moments exterior_moments(const DomainSpec& dom, const KernelSpec& k, const Vec2& x) {
  const double d = k.delta;
  switch (dom.shape) {
    case Shape::square:
    case Shape::rectangle: {
      double s = dom.hi.x() - x.x();
      if (s >= d) return {};
      return halfplane_cap_moments(k, Vec2(1, 0), s);
    }
    case Shape::disk: {
      if (dom.radius - (x - dom.center).norm() >= d) return {};
      break;
    }
    case Shape::cross: {
      int cnt = 0, which = -1;
      for (int j = 0; j < static_cast<int>(dom.interface_segments.size()); ++j)
        if (dom.interface_segments[j].distance(x) < d) {
          ++cnt;
          which = j;
        }
      if (cnt == 0) return {};
      if (cnt == 1) {
        // a single visible edge: the exterior inside the ball is an exact cap
        const Segment& sg = dom.interface_segments[which];
        return halfplane_cap_moments(k, sg.normal(), sg.normal().dot(sg.a - x));
      }
      break;
    }
  }
  RayIntervals region = [&](double th, std::vector<std::pair<double, double>>& out) {
    dom.exterior_intervals(x, th, d, out);
  };
  return polar_moments(k, region, dom.critical_angles(x, d));
}

CollarCoefficients compute_collar_coefficients(const BoundaryProjection& bp, const DomainSpec& dom,
                                               const KernelSpec& k) {
  if (bp.corner) return compute_corner_coefficients(bp, dom, k);
  Moments e = exterior_moments(dom, k, bp.x);
  CollarCoefficients c;
  const Vec2& n = bp.n;
  const Vec2& p = bp.p;
  double nn = n.dot(e.m2 * n), pp = p.dot(e.m2 * p), e1n = e.m1.dot(n);
  c.Q = 1.0 - (nn - 2.0 * bp.s * e1n);
  c.M = pp - nn + 2.0 * bp.s * e1n;
  // [u]_pp = d_ll u + kappa du/dn along the level set; the curvature part
  // moves into the boundary-data coefficient
  c.V = 2.0 * e1n + c.M * bp.kappa;
  c.mass = c.Q;
  c.diffusion = c.M;
  return c;
}

CollarCoefficients compute_corner_coefficients(const BoundaryProjection& bp, const DomainSpec& dom,
                                               const KernelSpec& k) {
  if (!bp.corner) throw GeometryError("corner coefficients requested for a non-corner point");
  const CornerProjection& cp = *bp.corner;
  if (!(cp.theta > 0.0 && cp.theta < 2.0 * M_PI)) throw GeometryError("corner angle outside (0, 2 pi)");
  Moments e = exterior_moments(dom, k, bp.x);
  Mat2 N;
  N.col(0) = cp.n1;
  N.col(1) = cp.n2;
  Mat2 Ni = N.inverse();
  Vec2 md = Ni * e.m1;
  Mat2 dd = Ni * e.m2 * Ni.transpose();
  const Vec2 xb[2] = {cp.xbar1, cp.xbar2};
  const Vec2 nv[2] = {cp.n1, cp.n2};
  const Vec2 pv[2] = {cp.p1, cp.p2};

  CollarCoefficients c;
  c.corner = true;
  c.theta = cp.theta;
  c.md1 = md[0];
  c.md2 = md[1];
  c.D1 = dd(0, 0) - 2.0 * (xb[0] - bp.x).dot(nv[0]) * md[0];
  c.D2 = dd(1, 1) - 2.0 * (xb[1] - bp.x).dot(nv[1]) * md[1];
  c.E12 = dd(0, 1);
  c.Qc = 1.0 - c.D1 + c.E12 * (-cp.n1.dot(cp.n2));

  Mat2 K = e.m2;
  for (int a = 0; a < 2; ++a) {
    Vec2 r = bp.x - xb[a];
    K += md[a] * (r * nv[a].transpose() + nv[a] * r.transpose());
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a) {
    double knn = nv[a].dot(K * nv[a]), kpp = pv[a].dot(K * pv[a]);
    if (kpp - knn > best + 1e-14) {
      best = kpp - knn;
      c.frame = a;
      c.mass = 1.0 - knn;
      c.diffusion = kpp - knn;
      c.cross = nv[a].dot(K * pv[a]);
    }
  }
  c.Q = c.mass;
  c.M = c.diffusion;
  return c;
}

namespace {

struct RowOut {
  std::vector<std::pair<int, double>> k, s;
  std::vector<RobinSlot> slots;
  double mass = 1.0, fcoef = 1.0, cond = 1.0;
  bool collar = false;
  BoundaryProjection bp;
  CollarCoefficients cc;
};

void add_row(std::vector<std::pair<int, double>>& dst, const SparseRow& r, double scale) {
  for (size_t q = 0; q < r.cols.size(); ++q) dst.emplace_back(r.cols[q], scale * r.vals[q]);
}

RowOut build_row(const NonlocalSystem& sys, const PointIndex& index, int i) {
  RowOut out;
  const auto& cloud = sys.cloud;
  const double alpha = sys.alpha, delta = cloud.delta;
  const Vec2& x = cloud.points[i];
  if (cloud.is_dirichlet(i)) {
    out.mass = 0.0;
    out.fcoef = 0.0;
    return out;
  }
  Stencil st = build_stencil(cloud, index, i);
  out.cond = st.cond;
  Moments mom = full_ball_moments(sys.kernel) - exterior_moments(sys.domain, sys.kernel, x);
  add_row(out.k, quadrature_row_interior(st, mom), -alpha);
  if (cloud.labels[i] != PointLabel::collar_interface) return out;

  out.collar = true;
  out.bp = project_to_interface(x, sys.domain, delta);
  out.cc = compute_collar_coefficients(out.bp, sys.domain, sys.kernel);
  ContourKernelSpec ck{delta};
  auto trace = [&](const Vec2& at) { return mls_row(cloud.points, index, at, delta); };
  if (!out.cc.corner) {
    const auto& bp = out.bp;
    add_row(out.k, quadrature_row_contour(st, ck, bp), -alpha * out.cc.M);
    out.mass = out.fcoef = out.cc.Q;
    double w = alpha * out.cc.V;
    out.slots.push_back({i, w, bp.xbar, bp.n, bp.p, RobinSlot::Kind::value});
    add_row(out.s, trace(bp.xbar).value(), w);
    return out;
  }
  const auto& cp = *out.bp.corner;
  const auto& cc = out.cc;
  const Vec2 xb[2] = {cp.xbar1, cp.xbar2};
  const Vec2 nv[2] = {cp.n1, cp.n2};
  const Vec2 pv[2] = {cp.p1, cp.p2};
  const int a = cc.frame;
  BoundaryProjection straight = out.bp;
  straight.arc = false;
  straight.n = nv[a];
  straight.p = pv[a];
  add_row(out.k, quadrature_row_contour(st, ck, straight), -alpha * cc.diffusion);
  out.mass = out.fcoef = cc.mass;
  const double mdv[2] = {cc.md1, cc.md2};
  for (int b = 0; b < 2; ++b) {
    double w = 2.0 * alpha * mdv[b];
    out.slots.push_back({i, w, xb[b], nv[b], pv[b], RobinSlot::Kind::value});
    add_row(out.s, trace(xb[b]).value(), w);
  }
  double w = 2.0 * alpha * cc.cross;
  out.slots.push_back({i, w, xb[a], nv[a], pv[a], RobinSlot::Kind::tangential});
  add_row(out.s, trace(xb[a]).derivative(pv[a]), w);
  return out;
}

}  // namespace

NonlocalSystem assemble_nonlocal(const PointCloud& cloud, const DomainSpec& dom, const KernelSpec& k, double alpha,
                                 bool parallel) {
  NonlocalSystem sys;
  sys.cloud = cloud;
  sys.domain = dom;
  sys.kernel = k;
  sys.alpha = alpha;
  const int n = static_cast<int>(cloud.size());
  PointIndex index(cloud.points, cloud.delta);
  std::vector<RowOut> rows(n);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      rows[i] = build_row(sys, index, i);
    } catch (...) {
#pragma omp critical(nonlocal_assembly_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  std::vector<Triplet> tk, ts;
  sys.dirichlet.assign(n, 0);
  sys.mass.resize(n);
  sys.fcoef.resize(n);
  double cmax = 1.0;
  for (int i = 0; i < n; ++i) {
    auto& r = rows[i];
    sys.dirichlet[i] = cloud.is_dirichlet(i);
    sys.mass[i] = r.mass;
    sys.fcoef[i] = r.fcoef;
    cmax = std::max(cmax, r.cond);
    for (auto& [j, v] : r.k) tk.emplace_back(i, j, v);
    for (auto& [j, v] : r.s) ts.emplace_back(i, j, v);
    for (auto& s : r.slots) sys.slots.push_back(s);
    if (r.collar) {
      sys.collar.push_back(i);
      sys.proj.push_back(r.bp);
      sys.coef.push_back(r.cc);
    }
  }
  sys.max_cond = {cmax};
  sys.K = from_triplets(n, n, tk);
  sys.S = from_triplets(n, n, ts);
  return sys;
}

Vec slot_data_analytic(const NonlocalSystem& sys, const AnalyticField& u0, double t, double beta) {
  Vec g(sys.slots.size());
  for (size_t q = 0; q < sys.slots.size(); ++q) {
    const auto& s = sys.slots[q];
    Vec2 gr = u0.grad(s.point, t);
    if (s.kind == RobinSlot::Kind::value) {
      g[q] = beta * u0.u(s.point, t) + gr.dot(s.normal);
    } else {
      g[q] = beta * gr.dot(s.tangent) + s.tangent.dot(u0.hess(s.point, t) * s.normal);
    }
  }
  return g;
}

Vec assemble_rhs(const NonlocalSystem& sys, const ScalarFn& f, const ScalarFn& uD, const Vec& slot_data, double t) {
  const int n = sys.size();
  Vec b(n);
  for (int i = 0; i < n; ++i) {
    const Vec2& x = sys.cloud.points[i];
    if (sys.dirichlet[i]) b[i] = uD ? uD(x, t) : 0.0;
    else b[i] = f ? sys.fcoef[i] * f(x, t) : 0.0;
  }
  for (size_t q = 0; q < sys.slots.size(); ++q) b[sys.slots[q].row] += sys.slots[q].weight * slot_data[q];
  return b;
}

SpMatC nonlocal_operator(const NonlocalSystem& sys, double beta, double dt) {
  const int n = sys.size();
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    if (sys.dirichlet[i]) {
      t.emplace_back(i, i, 1.0);
      continue;
    }
    t.emplace_back(i, i, sys.mass[i] / dt);
    for (SpMat::InnerIterator it(sys.K, i); it; ++it) t.emplace_back(i, it.col(), it.value());
    if (beta != 0.0)
      for (SpMat::InnerIterator it(sys.S, i); it; ++it) t.emplace_back(i, it.col(), beta * it.value());
  }
  SpMatC A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

NonlocalStepper::NonlocalStepper(const NonlocalSystem& sys, double beta, double dt)
    : sys_(&sys), dt_(dt), A_(nonlocal_operator(sys, beta, dt)), lu_(A_) {}

Vec NonlocalStepper::step(const Vec& u, const ScalarFn& f, const ScalarFn& uD, const Vec& slot_data,
                          double t_next) const {
  Vec b = assemble_rhs(*sys_, f, uD, slot_data, t_next);
  for (int i = 0; i < sys_->size(); ++i)
    if (!sys_->dirichlet[i]) b[i] += sys_->mass[i] / dt_ * u[i];
  return lu_.solve(b);
}

Vec sample(const std::vector<Vec2>& pts, const ScalarFn& f, double t) {
  Vec v(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) v[i] = f(pts[i], t);
  return v;
}

void write_snapshot_csv(const std::string& path, const std::vector<Vec2>& pts, const Vec& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,y,u\n" << std::setprecision(17);
  for (size_t i = 0; i < pts.size(); ++i) out << pts[i].x() << ',' << pts[i].y() << ',' << u[i] << '\n';
}

}  // namespace nlc
