#include "nlc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

namespace nlc {

Vec2 Segment::closest(const Vec2& x, double* tpar) const {
  Vec2 d = b - a;
  double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  if (tpar) *tpar = t;
  return a + t * d;
}

namespace {

std::vector<Segment> polygon_edges(const std::vector<Vec2>& v) {
  std::vector<Segment> e;
  for (size_t i = 0; i < v.size(); ++i) e.push_back({v[i], v[(i + 1) % v.size()]});
  return e;
}

std::vector<Corner> polygon_corners(const std::vector<Segment>& e) {
  std::vector<Corner> cs;
  const int n = static_cast<int>(e.size());
  for (int i = 0; i < n; ++i) {
    int in = (i + n - 1) % n;  // edge ending at e[i].a
    Vec2 tin = e[in].tangent(), tout = e[i].tangent();
    double turn = std::atan2(tin.x() * tout.y() - tin.y() * tout.x(), tin.dot(tout));
    Corner c;
    c.c = e[i].a;
    c.e1 = i;
    c.e2 = in;
    c.theta = M_PI - turn;
    cs.push_back(c);
  }
  return cs;
}

bool in_box(const Vec2& x, const Vec2& lo, const Vec2& hi, double tol) {
  return x.x() >= lo.x() - tol && x.x() <= hi.x() + tol && x.y() >= lo.y() - tol && x.y() <= hi.y() + tol;
}

// parameter t in (0, rmax) where the ray meets segment s, if any
bool ray_segment(const Vec2& x, const Vec2& d, const Segment& s, double& t) {
  Vec2 e = s.b - s.a;
  double den = d.x() * (-e.y()) - d.y() * (-e.x());
  if (std::abs(den) < 1e-300) return false;
  Vec2 r = s.a - x;
  t = (r.x() * (-e.y()) - r.y() * (-e.x())) / den;
  double u = (d.x() * r.y() - d.y() * r.x()) / den;
  return u >= -1e-14 && u <= 1 + 1e-14;
}

}  // namespace

DomainSpec square_nonlocal() {
  DomainSpec d;
  d.shape = Shape::square;
  d.name = "square";
  d.lo = {0, 0};
  d.hi = {1, 1};
  d.interface_segments = {{{1, 0}, {1, 1}}};
  d.dirichlet_segments = {{{0, 0}, {1, 0}}, {{0, 1}, {0, 0}}, {{1, 1}, {0, 1}}};
  return d;
}

DomainSpec disk_nonlocal() {
  DomainSpec d;
  d.shape = Shape::disk;
  d.name = "disk";
  d.center = {0, 0};
  d.radius = 1.0;
  d.lo = {-1, -1};
  d.hi = {1, 1};
  d.pinned_points = {{0, -1}};
  return d;
}

DomainSpec cross_nonlocal() {
  DomainSpec d;
  d.shape = Shape::cross;
  d.name = "cross";
  const double L = d.arm_length, w = d.arm_half_width;
  d.lo = {-L, -L};
  d.hi = {L, L};
  std::vector<Vec2> v = {{L, -w}, {L, w},   {w, w},   {w, L},   {-w, L},  {-w, w},
                         {-L, w}, {-L, -w}, {-w, -w}, {-w, -L}, {w, -L},  {w, -w}};
  d.interface_segments = polygon_edges(v);
  d.corners = polygon_corners(d.interface_segments);
  d.pinned_points = {{-L, -w}};
  return d;
}

DomainSpec domain_from_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  std::string shape = kv.count("shape") ? kv["shape"] : "";
  DomainSpec d;
  if (shape == "square") d = square_nonlocal();
  else if (shape == "disk") d = disk_nonlocal();
  else if (shape == "cross") d = cross_nonlocal();
  else throw GeometryError("unknown shape '" + shape + "'");
  if (shape == "disk" && kv.count("radius")) {
    d.radius = std::stod(kv["radius"]);
    d.lo = d.center - Vec2(d.radius, d.radius);
    d.hi = d.center + Vec2(d.radius, d.radius);
    d.pinned_points = {{d.center.x(), d.center.y() - d.radius}};
  }
  return d;
}

bool DomainSpec::inside(const Vec2& x, double tol) const {
  switch (shape) {
    case Shape::square:
    case Shape::rectangle:
      return in_box(x, lo, hi, tol);
    case Shape::disk:
      return (x - center).norm() <= radius + tol;
    case Shape::cross: {
      const double L = arm_length, w = arm_half_width;
      return in_box(x, {-L, -w}, {L, w}, tol) || in_box(x, {-w, -L}, {w, L}, tol);
    }
  }
  return false;
}

double DomainSpec::dist_interface(const Vec2& x) const {
  if (shape == Shape::disk) return std::abs((x - center).norm() - radius);
  double d = std::numeric_limits<double>::infinity();
  for (auto& s : interface_segments) d = std::min(d, s.distance(x));
  return d;
}

bool DomainSpec::in_exterior(const Vec2& y) const {
  switch (shape) {
    case Shape::square:
    case Shape::rectangle:
      return y.x() > hi.x();
    case Shape::disk:
      return (y - center).norm() > radius;
    case Shape::cross:
      return !inside(y, 0.0);
  }
  return false;
}

void DomainSpec::exterior_intervals(const Vec2& x, double th, double rmax,
                                    std::vector<std::pair<double, double>>& out) const {
  Vec2 d(std::cos(th), std::sin(th));
  if (shape == Shape::square || shape == Shape::rectangle) {
    if (d.x() > 0) {
      double r = (hi.x() - x.x()) / d.x();
      if (r < rmax) out.emplace_back(std::max(r, 0.0), rmax);
    }
    return;
  }
  if (shape == Shape::disk) {
    Vec2 q = x - center;
    double b = q.dot(d), cc = q.squaredNorm() - radius * radius;
    double disc = b * b - cc;
    if (cc <= 0) {
      double r = -b + std::sqrt(std::max(disc, 0.0));
      if (r < rmax) out.emplace_back(std::max(r, 0.0), rmax);
    } else if (disc <= 0) {
      out.emplace_back(0.0, rmax);
    } else {
      double r0 = -b - std::sqrt(disc), r1 = -b + std::sqrt(disc);
      if (r1 <= 0 || r0 >= rmax) {
        out.emplace_back(0.0, rmax);
      } else {
        if (r0 > 0) out.emplace_back(0.0, r0);
        if (r1 < rmax) out.emplace_back(r1, rmax);
      }
    }
    return;
  }
  std::vector<double> ts = {0.0, rmax};
  for (auto& s : interface_segments) {
    double t;
    if (ray_segment(x, d, s, t) && t > 0 && t < rmax) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    double a = ts[i], b = ts[i + 1];
    if (b - a < 1e-15) continue;
    if (in_exterior(x + 0.5 * (a + b) * d)) {
      if (!out.empty() && std::abs(out.back().second - a) < 1e-15) out.back().second = b;
      else out.emplace_back(a, b);
    }
  }
}

std::vector<double> DomainSpec::critical_angles(const Vec2& x, double rmax) const {
  std::vector<double> a;
  auto circle_hits = [&](const Vec2& c, double R) {
    Vec2 q = c - x;
    double d = q.norm();
    if (d <= std::abs(R - rmax) || d >= R + rmax || d == 0) return;
    double g = std::acos(std::clamp((rmax * rmax + d * d - R * R) / (2 * rmax * d), -1.0, 1.0));
    double phi = std::atan2(q.y(), q.x());
    a.push_back(phi - g);
    a.push_back(phi + g);
  };
  if (shape == Shape::square || shape == Shape::rectangle) {
    double s = hi.x() - x.x();
    if (s < rmax && s > -rmax) {
      double g = std::acos(std::clamp(s / rmax, -1.0, 1.0));
      a.push_back(-g);
      a.push_back(g);
    }
    return a;
  }
  if (shape == Shape::disk) {
    circle_hits(center, radius);
    return a;
  }
  for (auto& s : interface_segments) {
    Vec2 v = s.a - x;
    if (v.norm() < rmax && v.norm() > 0) a.push_back(std::atan2(v.y(), v.x()));
    // rim intersections
    Vec2 e = s.b - s.a;
    double A = e.squaredNorm(), B = 2 * v.dot(e), C = v.squaredNorm() - rmax * rmax;
    double disc = B * B - 4 * A * C;
    if (disc < 0) continue;
    for (double sg : {-1.0, 1.0}) {
      double t = (-B + sg * std::sqrt(disc)) / (2 * A);
      if (t >= 0 && t <= 1) {
        Vec2 p = v + t * e;
        a.push_back(std::atan2(p.y(), p.x()));
      }
    }
  }
  return a;
}

double DomainSpec::min_feature_size() const {
  switch (shape) {
    case Shape::square:
    case Shape::rectangle:
      return std::min(hi.x() - lo.x(), hi.y() - lo.y());
    case Shape::disk:
      return radius;
    case Shape::cross:
      return 2 * arm_half_width;
  }
  return 0;
}

PointCloud generate_point_cloud(const DomainSpec& dom, double h, double delta) {
  if (!(h > 0)) throw GeometryError("point cloud: h must be positive");
  if (delta / h < 2.0) throw GeometryError("point cloud: delta/h < 2 gives deficient stencils");
  if (dom.role != Role::nonlocal) throw GeometryError("point cloud: domain must be nonlocal");
  if (delta > dom.min_feature_size())
    std::cerr << "warning: horizon " << delta << " exceeds minimal feature size " << dom.min_feature_size()
              << "\n";
  PointCloud pc;
  pc.h = h;
  pc.delta = delta;
  Vec2 lo = dom.lo - Vec2(delta, delta), hi = dom.hi + Vec2(delta, delta);
  const double tol = 1e-9 * h;
  int i0 = static_cast<int>(std::floor(lo.x() / h)) - 1, i1 = static_cast<int>(std::ceil(hi.x() / h)) + 1;
  int j0 = static_cast<int>(std::floor(lo.y() / h)) - 1, j1 = static_cast<int>(std::ceil(hi.y() / h)) + 1;
  std::vector<bool> pinned_found(dom.pinned_points.size(), false);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      Vec2 x(i * h, j * h);
      PointLabel lab;
      bool keep = false;
      for (size_t k = 0; k < dom.pinned_points.size(); ++k) {
        if ((x - dom.pinned_points[k]).norm() < tol) {
          lab = PointLabel::pinned;
          keep = true;
          pinned_found[k] = true;
        }
      }
      // lattice points on the outer Dirichlet sides carry boundary data
      bool on_d = false;
      for (auto& s : dom.dirichlet_segments)
        if (s.distance(x) < tol) on_d = true;
      if (!keep && dom.inside(x, tol) && !on_d) {
        lab = dom.dist_interface(x) <= delta ? PointLabel::collar_interface : PointLabel::interior;
        keep = true;
      }
      if (!keep && !dom.dirichlet_segments.empty() && !dom.in_exterior(x) && (on_d || !dom.inside(x, tol))) {
        double dd = std::numeric_limits<double>::infinity();
        for (auto& s : dom.dirichlet_segments) dd = std::min(dd, s.distance(x));
        if (dd <= delta) {
          lab = PointLabel::collar_dirichlet;
          keep = true;
        }
      }
      if (keep) {
        pc.points.push_back(x);
        pc.labels.push_back(lab);
      }
    }
  }
  if (pc.points.empty()) throw GeometryError("point cloud: empty domain");
  for (bool f : pinned_found)
    if (!f) throw GeometryError("point cloud: pinned point is not a lattice point");
  return pc;
}

double fill_distance(const std::vector<Vec2>& pts) {
  if (pts.size() < 2) return 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < std::min<size_t>(pts.size(), 64); ++i) lo = std::min(lo, (pts[i] - pts[0]).norm());
  PointIndex idx(pts, lo);
  double h = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    double r = lo;
    while (!std::isfinite(best)) {
      for (int j : idx.query(pts[i], r * 1.0000001))
        if (static_cast<size_t>(j) != i) best = std::min(best, (pts[j] - pts[i]).norm());
      r *= 2;
    }
    h = std::max(h, best);
  }
  return h;
}

BoundaryProjection project_to_interface(const Vec2& x, const DomainSpec& dom, double delta) {
  BoundaryProjection bp;
  bp.x = x;
  if (dom.shape == Shape::disk) {
    Vec2 q = x - dom.center;
    double r = q.norm();
    if (r == 0) throw GeometryError("projection: center of the disk has no unique projection");
    bp.n = q / r;
    bp.xbar = dom.center + dom.radius * bp.n;
    bp.s = dom.radius - r;
    bp.p = clockwise(bp.n);
    bp.kappa = 1.0 / dom.radius;
    bp.arc = true;
    bp.arc_center = dom.center;
    bp.arc_radius = r;
    bp.segment = 0;
    return bp;
  }
  const auto& segs = dom.interface_segments;
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  std::vector<int> near;
  for (int k = 0; k < static_cast<int>(segs.size()); ++k) {
    double d = segs[k].distance(x);
    if (d < bd - 1e-14) {
      bd = d;
      best = k;
    }
    if (d < delta) near.push_back(k);
  }
  if (best < 0) throw GeometryError("projection: no interface segments");
  bp.segment = best;
  bp.xbar = segs[best].closest(x);
  bp.s = bd;
  bp.n = segs[best].normal();
  bp.p = clockwise(bp.n);
  bp.kappa = 0.0;
  if (near.size() >= 2) {
    int bc = -1;
    double bcd = std::numeric_limits<double>::infinity();
    for (int ci = 0; ci < static_cast<int>(dom.corners.size()); ++ci) {
      const Corner& c = dom.corners[ci];
      bool a = std::find(near.begin(), near.end(), c.e1) != near.end();
      bool b = std::find(near.begin(), near.end(), c.e2) != near.end();
      double d = (x - c.c).norm();
      if (a && b && d < bcd - 1e-14) {
        bcd = d;
        bc = ci;
      }
    }
    if (bc >= 0) {
      const Corner& c = dom.corners[bc];
      CornerProjection cp;
      cp.corner = bc;
      cp.c = c.c;
      cp.theta = c.theta;
      cp.concave = c.concave();
      cp.n1 = segs[c.e1].normal();
      cp.n2 = segs[c.e2].normal();
      cp.p1 = clockwise(cp.n1);
      cp.p2 = clockwise(cp.n2);
      // clamped projections; off-segment feet collapse onto the corner
      cp.xbar1 = segs[c.e1].closest(x);
      cp.xbar2 = segs[c.e2].closest(x);
      bp.corner = cp;
    }
  }
  return bp;
}

Vec2 contour_point(const BoundaryProjection& bp, double l) {
  if (bp.arc) {
    Vec2 q = bp.x - bp.arc_center;
    double phi = std::atan2(q.y(), q.x()) + l / bp.arc_radius;
    return bp.arc_center + bp.arc_radius * Vec2(std::cos(phi), std::sin(phi));
  }
  // counter-clockwise along the boundary, i.e. along -p
  return bp.x - l * bp.p;
}

bool contour_truncated(const BoundaryProjection& bp, const DomainSpec& dom, double reach) {
  for (double l : {-reach, reach})
    if (!dom.inside(contour_point(bp, l), 1e-12)) return true;
  return false;
}

PointIndex::PointIndex(const std::vector<Vec2>& pts, double cell) : pts_(pts), cell_(cell) {
  if (pts.empty()) return;
  Vec2 lo = pts[0], hi = pts[0];
  for (auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  lo_ = lo;
  nx_ = static_cast<int>((hi.x() - lo.x()) / cell_) + 1;
  ny_ = static_cast<int>((hi.y() - lo.y()) / cell_) + 1;
  bins_.assign(static_cast<size_t>(nx_) * ny_, {});
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    int bx = static_cast<int>((pts[i].x() - lo_.x()) / cell_);
    int by = static_cast<int>((pts[i].y() - lo_.y()) / cell_);
    bins_[static_cast<size_t>(by) * nx_ + bx].push_back(i);
  }
}

std::vector<int> PointIndex::query(const Vec2& x, double r) const {
  std::vector<int> out;
  if (pts_.empty()) return out;
  int bx0 = std::max(0, static_cast<int>(std::floor((x.x() - r - lo_.x()) / cell_)));
  int bx1 = std::min(nx_ - 1, static_cast<int>(std::floor((x.x() + r - lo_.x()) / cell_)));
  int by0 = std::max(0, static_cast<int>(std::floor((x.y() - r - lo_.y()) / cell_)));
  int by1 = std::min(ny_ - 1, static_cast<int>(std::floor((x.y() + r - lo_.y()) / cell_)));
  const double r2 = r * r;
  for (int by = by0; by <= by1; ++by)
    for (int bx = bx0; bx <= bx1; ++bx)
      for (int j : bins_[static_cast<size_t>(by) * nx_ + bx])
        if ((pts_[j] - x).squaredNorm() < r2) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nlc
