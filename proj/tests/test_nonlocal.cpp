#include <cmath>

#include "doctest.h"
#include "nlc/geometry.hpp"
#include "nlc/nonlocal.hpp"

using namespace nlc;

namespace {

// Polar midpoint oracle for exterior moments: indicator sampled on an (r, theta) grid.
template <class Ext>
Moments polar_oracle(const Vec2& x, double d, Ext ext, int nr = 400, int nth = 4000) {
  Moments m;
  double J = 4.0 / (M_PI * d * d * d * d);
  double dr = d / nr, dth = 2 * M_PI / nth;
  for (int a = 0; a < nth; ++a) {
    double th = (a + 0.5) * dth;
    Vec2 e(std::cos(th), std::sin(th));
    for (int b = 0; b < nr; ++b) {
      double r = (b + 0.5) * dr;
      if (!ext(x + r * e)) continue;
      double w = J * r * dr * dth;
      m.m0 += w;
      m.m1 += w * r * e;
      m.m2 += w * r * r * e * e.transpose();
    }
  }
  return m;
}

AnalyticField quadratic_field() {
  // u = x^2 - x y + 0.5 y^2 + 0.3 x - 0.2 y + 1, Laplacian 3
  AnalyticField f;
  f.u = [](const Vec2& p, double) {
    return p.x() * p.x() - p.x() * p.y() + 0.5 * p.y() * p.y() + 0.3 * p.x() - 0.2 * p.y() + 1;
  };
  f.grad = [](const Vec2& p, double) { return Vec2(2 * p.x() - p.y() + 0.3, -p.x() + p.y() - 0.2); };
  f.hess = [](const Vec2&, double) {
    Mat2 H;
    H << 2, -1, -1, 1;
    return H;
  };
  f.ut = [](const Vec2&, double) { return 0.0; };
  return f;
}

}  // namespace

TEST_CASE("flat collar coefficients at the boundary") {
  DomainSpec sq = square_nonlocal();
  double d = 0.3;
  KernelSpec k{KernelFamily::J1_constant, d};
  Vec2 x(1.0, 0.5);
  BoundaryProjection bp = project_to_interface(x, sq, d);
  CollarCoefficients c = compute_collar_coefficients(bp, sq, k);
  CHECK(std::abs(c.Q - 0.5) < 1e-6);
  CHECK(std::abs(c.V - 16.0 / (3 * M_PI * d)) < 1e-6);
  CHECK(std::abs(c.M) < 1e-6);
}

TEST_CASE("flat collar coefficients inside the collar against the oracle") {
  DomainSpec sq = square_nonlocal();
  double d = 0.3;
  KernelSpec k{KernelFamily::J1_constant, d};
  for (double s : {0.05, 0.12, 0.29}) {
    Vec2 x(1.0 - s, 0.5);
    BoundaryProjection bp = project_to_interface(x, sq, d);
    CollarCoefficients c = compute_collar_coefficients(bp, sq, k);
    Moments e = polar_oracle(x, d, [](const Vec2& y) { return y.x() > 1.0; });
    double nn = e.m2(0, 0), pp = e.m2(1, 1), e1 = e.m1.x();
    CHECK(c.Q == doctest::Approx(1 - (nn - 2 * s * e1)).epsilon(1e-4));
    CHECK(c.M == doctest::Approx(pp - nn + 2 * s * e1).epsilon(1e-3));
    // absolute scale: V at the boundary is 16/(3 pi d)
    CHECK(std::abs(c.V - 2 * e1) < 1e-4 * 16 / (3 * M_PI * d));
    CHECK(c.Q > 0.5);
  }
}

TEST_CASE("curved collar coefficients carry the curvature term") {
  DomainSpec dk = disk_nonlocal();
  double d = 0.3;
  KernelSpec k{KernelFamily::J1_constant, d};
  Vec2 x = 0.9 * Vec2(std::cos(0.4), std::sin(0.4));
  BoundaryProjection bp = project_to_interface(x, dk, d);
  CollarCoefficients c = compute_collar_coefficients(bp, dk, k);
  Moments e = polar_oracle(x, d, [](const Vec2& y) { return y.norm() > 1.0; }, 600, 6000);
  Moments got = exterior_moments(dk, k, x);
  CHECK(got.m0 == doctest::Approx(e.m0).epsilon(1e-3));
  CHECK((got.m2 - e.m2).norm() < 1e-3);
  double s = 0.1;
  Vec2 n = bp.n, p = bp.p;
  double M = p.dot(e.m2 * p) - n.dot(e.m2 * n) + 2 * s * e.m1.dot(n);
  CHECK(c.M == doctest::Approx(M).epsilon(2e-3));
  CHECK(c.V == doctest::Approx(2 * e.m1.dot(n) + M).epsilon(1e-3));  // kappa = 1
  CHECK(c.M > 0);
}

TEST_CASE("right-angle corner point: Q^c = 1/4") {
  DomainSpec cr = cross_nonlocal();
  double d = 0.3;
  KernelSpec k{KernelFamily::J1_constant, d};
  Vec2 c0(1.0, 0.5);
  // a hair inside so the projection is well defined
  Vec2 x = c0 + Vec2(-1e-12, -1e-12);
  BoundaryProjection bp = project_to_interface(x, cr, d);
  REQUIRE(bp.corner.has_value());
  CollarCoefficients c = compute_collar_coefficients(bp, cr, k);
  REQUIRE(c.corner);
  // quadrature oracle for the d-frame moment; n1, n2 are the two axis normals
  Moments e = polar_oracle(c0, d, [&](const Vec2& y) { return !cr.inside(y, 0.0); });
  double D_oracle = e.m2(0, 0);
  CHECK(std::abs(c.D1 - D_oracle) < 1e-4);
  CHECK(std::abs(c.D2 - D_oracle) < 1e-4);
  CHECK(std::abs(c.Qc - (1 - D_oracle)) < 1e-4);
  CHECK(std::abs(c.Qc - 0.25) < 1e-4);
  CHECK(std::abs(std::abs(c.E12) - 1 / (2 * M_PI)) < 1e-4);
  CHECK(c.mass == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("assembled operator annihilates constants") {
  for (auto dom : {square_nonlocal(), disk_nonlocal(), cross_nonlocal()}) {
    double h = 0.1, d = (dom.shape == Shape::cross ? 3.5 : 3.9) * h;
    PointCloud pc = generate_point_cloud(dom, h, d);
    KernelSpec k{KernelFamily::J1_constant, d};
    NonlocalSystem sys = assemble_nonlocal(pc, dom, k, 1.0);
    Vec ones = Vec::Ones(sys.size());
    Vec Ku = sys.K * ones;
    for (int i = 0; i < sys.size(); ++i)
      if (!sys.dirichlet[i]) CHECK(std::abs(Ku[i]) < 1e-8 / (h * h));
  }
}

TEST_CASE("discrete consistency for quadratics on straight and cornered boundaries") {
  AnalyticField u = quadratic_field();
  for (auto dom : {square_nonlocal(), cross_nonlocal()}) {
    double h = 0.1, d = (dom.shape == Shape::cross ? 3.5 : 3.9) * h;
    PointCloud pc = generate_point_cloud(dom, h, d);
    KernelSpec k{KernelFamily::J1_constant, d};
    double alpha = 1.7, beta = 4.0;
    NonlocalSystem sys = assemble_nonlocal(pc, dom, k, alpha);
    Vec uv = sample(pc.points, u.u, 0.0);
    Vec lhs = sys.K * uv + beta * (sys.S * uv);
    ScalarFn f = [&](const Vec2&, double) { return -alpha * 3.0; };
    Vec g = slot_data_analytic(sys, u, 0.0, beta);
    Vec rhs = assemble_rhs(sys, f, u.u, g, 0.0);
    double worst = 0;
    for (int i = 0; i < sys.size(); ++i)
      if (!sys.dirichlet[i]) worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("serial and parallel assembly agree") {
  DomainSpec dom = cross_nonlocal();
  double h = 0.1, d = 0.35;
  PointCloud pc = generate_point_cloud(dom, h, d);
  KernelSpec k{KernelFamily::J1_constant, d};
  NonlocalSystem a = assemble_nonlocal(pc, dom, k, 1.0, false);
  NonlocalSystem b = assemble_nonlocal(pc, dom, k, 1.0, true);
  CHECK((Mat(a.K) - Mat(b.K)).norm() == 0.0);
  CHECK((Mat(a.S) - Mat(b.S)).norm() == 0.0);
  CHECK(a.slots.size() == b.slots.size());
}

TEST_CASE("maximum principle smoke test") {
  // zero source, Neumann (beta = 0, g = 0) interface, unit Dirichlet data,
  // zero start: the state rises towards 1 without leaving [0, 1] materially
  DomainSpec dom = square_nonlocal();
  double h = 0.05, d = 3.9 * h, dt = 100 * h * h;
  PointCloud pc = generate_point_cloud(dom, h, d);
  KernelSpec k{KernelFamily::J1_constant, d};
  NonlocalSystem sys = assemble_nonlocal(pc, dom, k, 1.0);
  NonlocalStepper st(sys, 0.0, dt);
  Vec u = Vec::Zero(sys.size());
  Vec g = Vec::Zero(sys.slots.size());
  ScalarFn one = [](const Vec2&, double) { return 1.0; };
  double lo = 0, hi = 0;
  for (int n = 1; n <= 40; ++n) {
    u = st.step(u, nullptr, one, g, n * dt);
    lo = std::min(lo, u.minCoeff());
    hi = std::max(hi, u.maxCoeff());
  }
  CHECK(lo > -1e-2);
  CHECK(hi < 1 + 1e-2);
  CHECK(u.minCoeff() > 0.9);  // close to the steady state u = 1
}

TEST_CASE("Dirichlet rows are identity rows of the step matrix") {
  DomainSpec dom = square_nonlocal();
  double h = 0.1, d = 0.39;
  PointCloud pc = generate_point_cloud(dom, h, d);
  NonlocalSystem sys = assemble_nonlocal(pc, dom, KernelSpec{KernelFamily::J1_constant, d}, 1.0);
  SpMatC A = nonlocal_operator(sys, 2.0, 0.1);
  Mat Ad(A);
  for (int i = 0; i < sys.size(); ++i)
    if (sys.dirichlet[i]) {
      CHECK(Ad(i, i) == 1.0);
      CHECK(Ad.row(i).cwiseAbs().sum() == 1.0);
    }
}
