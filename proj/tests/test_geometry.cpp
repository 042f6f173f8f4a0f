#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "nlc/geometry.hpp"

using namespace nlc;

TEST_CASE("segment normals point away from the domain") {
  DomainSpec sq = square_nonlocal();
  REQUIRE(sq.interface_segments.size() == 1);
  CHECK((sq.interface_segments[0].normal() - Vec2(1, 0)).norm() < 1e-15);

  DomainSpec cr = cross_nonlocal();
  CHECK(cr.interface_segments.size() == 12);
  for (auto& s : cr.interface_segments) {
    Vec2 mid = 0.5 * (s.a + s.b);
    CHECK(cr.inside(mid - 1e-3 * s.normal()));
    CHECK_FALSE(cr.inside(mid + 1e-3 * s.normal()));
  }
  int concave = 0;
  for (auto& c : cr.corners) concave += c.concave();
  CHECK(cr.corners.size() == 12);
  CHECK(concave == 4);
}

TEST_CASE("point cloud labels on the square") {
  double h = 0.1, d = 0.39;
  PointCloud pc = generate_point_cloud(square_nonlocal(), h, d);
  int ndir = 0, ncol = 0;
  for (size_t i = 0; i < pc.size(); ++i) {
    const Vec2& x = pc.points[i];
    if (pc.is_dirichlet(i)) {
      ++ndir;
      // Dirichlet data lives on or outside the three outer sides, never past x = 1
      CHECK(x.x() <= 1 + 1e-12);
      CHECK((x.x() <= 1e-12 || x.y() <= 1e-12 || x.y() >= 1 - 1e-12));
    } else {
      CHECK(x.x() > 1e-12);
      CHECK(x.x() <= 1 + 1e-12);
    }
    if (pc.labels[i] == PointLabel::collar_interface) {
      ++ncol;
      CHECK(1 - x.x() < d);
    }
  }
  CHECK(ndir > 0);
  // interface collar: columns 1 - 3h .. 1 with nine interior rows each
  CHECK(ncol == 4 * 9);
}

TEST_CASE("fill distance of a lattice") {
  PointCloud pc = generate_point_cloud(disk_nonlocal(), 0.05, 0.195);
  double fd = fill_distance(pc.points);
  CHECK(fd == doctest::Approx(0.05).epsilon(1e-9));
}

TEST_CASE("point index agrees with brute force") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Vec2> pts(500);
  for (auto& p : pts) p = {U(rng), U(rng)};
  PointIndex idx(pts, 0.13);
  for (int q = 0; q < 30; ++q) {
    Vec2 x(U(rng), U(rng));
    double r = 0.05 + 0.3 * std::abs(U(rng));
    std::vector<int> want;
    for (int j = 0; j < 500; ++j)
      if ((pts[j] - x).norm() < r) want.push_back(j);
    CHECK(idx.query(x, r) == want);
  }
}

TEST_CASE("projection onto a circle carries positive curvature") {
  DomainSpec dk = disk_nonlocal();
  Vec2 x(0.6, 0.6);
  BoundaryProjection bp = project_to_interface(x, dk, 0.4);
  CHECK(bp.arc);
  CHECK(bp.kappa == doctest::Approx(1.0));
  CHECK((bp.n - x.normalized()).norm() < 1e-14);
  CHECK(bp.s == doctest::Approx(1.0 - x.norm()));
  CHECK((bp.xbar - x.normalized()).norm() < 1e-14);
  // p is n rotated clockwise
  CHECK((bp.p - clockwise(bp.n)).norm() < 1e-15);
  // the contour stays at distance |x| from the center
  for (double l : {-0.3, 0.1, 0.25}) CHECK(contour_point(bp, l).norm() == doctest::Approx(x.norm()));
}

TEST_CASE("corner projection near a convex corner of the cross") {
  DomainSpec cr = cross_nonlocal();
  Vec2 x(0.9, 0.4);  // near the corner (1, 0.5)
  BoundaryProjection bp = project_to_interface(x, cr, 0.35);
  REQUIRE(bp.corner.has_value());
  const auto& c = *bp.corner;
  CHECK((c.c - Vec2(1, 0.5)).norm() < 1e-14);
  CHECK(c.theta == doctest::Approx(M_PI / 2));
  CHECK_FALSE(c.concave);
  std::set<std::pair<double, double>> feet = {{c.xbar1.x(), c.xbar1.y()}, {c.xbar2.x(), c.xbar2.y()}};
  CHECK(feet.count({1.0, 0.4}) == 1);
  CHECK(feet.count({0.9, 0.5}) == 1);
}

TEST_CASE("concave corner projections collapse onto the corner") {
  DomainSpec cr = cross_nonlocal();
  // outside both edge spans of the reentrant corner (0.5, 0.5)
  Vec2 x(0.4, 0.4);
  BoundaryProjection bp = project_to_interface(x, cr, 0.2);
  REQUIRE(bp.corner.has_value());
  CHECK(bp.corner->concave);
  CHECK(bp.corner->theta == doctest::Approx(1.5 * M_PI));
}

TEST_CASE("exterior intervals on the square interface") {
  DomainSpec sq = square_nonlocal();
  std::vector<std::pair<double, double>> out;
  Vec2 x(0.9, 0.5);
  sq.exterior_intervals(x, 0.0, 0.3, out);
  REQUIRE(out.size() == 1);
  CHECK(out[0].first == doctest::Approx(0.1));
  CHECK(out[0].second == doctest::Approx(0.3));
  out.clear();
  sq.exterior_intervals(x, M_PI, 0.3, out);
  CHECK(out.empty());
}

TEST_CASE("local meshes tile their domains") {
  auto total_area = [](const TriMesh& m) {
    double a = 0;
    for (size_t t = 0; t < m.tris.size(); ++t) {
      CHECK(m.area(static_cast<int>(t)) > 0);
      a += m.area(static_cast<int>(t));
    }
    return a;
  };
  TriMesh line = generate_mesh(line_local(), 0.1);
  CHECK(total_area(line) == doctest::Approx(1.0).epsilon(1e-12));
  int ngi = 0;
  for (size_t i = 0; i < line.nodes.size(); ++i)
    if (line.tags[i] == NodeTag::gamma_i) {
      ++ngi;
      CHECK(line.nodes[i].x() == doctest::Approx(1.0));
    }
  // the end points (1,0), (1,1) also touch the outer sides and stay Dirichlet
  CHECK(ngi == 9);

  TriMesh ring = generate_mesh(circle_local(), 0.1);
  // polygonal hole: area within O(h^2) of 16 - pi
  CHECK(std::abs(total_area(ring) - (16 - M_PI)) < 0.05);
  for (size_t i = 0; i < ring.nodes.size(); ++i)
    if (ring.tags[i] == NodeTag::gamma_i) CHECK(ring.nodes[i].norm() == doctest::Approx(1.0).epsilon(1e-12));

  TriMesh crm = generate_mesh(cross_local(), 0.1);
  CHECK(total_area(crm) == doctest::Approx(16.0 - 3.0).epsilon(1e-12));
}

TEST_CASE("mesh file round trip") {
  TriMesh m = unit_square_mesh(4);
  std::string path = "mesh_roundtrip_test.txt";
  write_mesh(m, path);
  TriMesh r = read_mesh(path);
  CHECK(r.nodes.size() == m.nodes.size());
  CHECK(r.tris == m.tris);
  for (size_t i = 0; i < m.nodes.size(); ++i) CHECK((r.nodes[i] - m.nodes[i]).norm() < 1e-15);
  std::remove(path.c_str());
}

TEST_CASE("config parsing") {
  DomainSpec d = domain_from_config("shape = disk  # comment\nradius=0.5\n");
  CHECK(d.shape == Shape::disk);
  CHECK(d.radius == 0.5);
  CHECK_THROWS_AS(domain_from_config("shape=hexagon"), GeometryError);
}
