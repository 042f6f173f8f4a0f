#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlc/kernels.hpp"

namespace nlc {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Directed boundary segment; the domain lies to the left, so the exterior
// normal is the right-hand normal of (b - a).
struct Segment {
  Vec2 a, b;
  Vec2 tangent() const { return (b - a).normalized(); }
  Vec2 normal() const {
    Vec2 t = tangent();
    return {t.y(), -t.x()};
  }
  double length() const { return (b - a).norm(); }
  Vec2 closest(const Vec2& x, double* tpar = nullptr) const;
  double distance(const Vec2& x) const { return (closest(x) - x).norm(); }
};

// p is n rotated clockwise by 90 degrees.
inline Vec2 clockwise(const Vec2& n) { return {n.y(), -n.x()}; }

struct Corner {
  Vec2 c;
  int e1 = -1;  // outgoing edge (Gamma_i1)
  int e2 = -1;  // incoming edge (Gamma_i2)
  double theta = 0.0;  // interior angle
  bool concave() const { return theta > M_PI; }
};

enum class Shape { square, disk, cross, rectangle };
enum class Role { nonlocal, local };

struct DomainSpec {
  Shape shape = Shape::square;
  Role role = Role::nonlocal;
  std::string name;
  // square / rectangle / outer box of local domains
  Vec2 lo{0, 0}, hi{1, 1};
  // disk
  Vec2 center{0, 0};
  double radius = 1.0;
  // cross: arms reach +-arm_length, half-width arm_half_width
  double arm_length = 1.0, arm_half_width = 0.5;

  // polygonal interface pieces (square, cross); the disk interface is the circle itself
  std::vector<Segment> interface_segments;
  std::vector<Segment> dirichlet_segments;  // outer Dirichlet boundary of a nonlocal square
  std::vector<Corner> corners;              // corners between two interface segments
  std::vector<Vec2> pinned_points;          // single-point Dirichlet constraints

  bool interface_is_circle() const { return shape == Shape::disk; }

  // closed nonlocal domain
  bool inside(const Vec2& x, double tol = 1e-12) const;
  // distance to the interface Gamma_i
  double dist_interface(const Vec2& x) const;
  // y lies where no cloud data exists: the Robin exterior of the nonlocal side
  bool in_exterior(const Vec2& y) const;
  // portions of the ray x + r (cos th, sin th), r in [0, rmax], lying in the exterior
  void exterior_intervals(const Vec2& x, double th, double rmax,
                          std::vector<std::pair<double, double>>& out) const;
  // angles where the exterior of B(x, rmax) may change smoothness
  std::vector<double> critical_angles(const Vec2& x, double rmax) const;
  double min_feature_size() const;
};

DomainSpec square_nonlocal();  // [0,1]^2, Gamma_i = {x = 1}, Dirichlet collar elsewhere
DomainSpec disk_nonlocal();    // unit disk, pinned at (0,-1)
DomainSpec cross_nonlocal();   // arms to +-1, half-width 1/2, pinned at (-1,-1/2)

// Parse "shape=disk" style key-value config text.
DomainSpec domain_from_config(const std::string& text);

enum class PointLabel { interior, collar_interface, collar_dirichlet, pinned };

struct PointCloud {
  std::vector<Vec2> points;
  std::vector<PointLabel> labels;
  double h = 0.0;
  double delta = 0.0;
  size_t size() const { return points.size(); }
  bool is_dirichlet(size_t i) const {
    return labels[i] == PointLabel::collar_dirichlet || labels[i] == PointLabel::pinned;
  }
};

PointCloud generate_point_cloud(const DomainSpec& dom, double h, double delta);
double fill_distance(const std::vector<Vec2>& pts);

struct CornerProjection {
  int corner = -1;
  Vec2 c;
  double theta = 0.0;
  bool concave = false;
  Vec2 xbar1, xbar2, n1, n2, p1, p2;
};

struct BoundaryProjection {
  Vec2 x, xbar;
  double s = 0.0;
  Vec2 n, p;
  double kappa = 0.0;
  int segment = -1;
  bool arc = false;  // contour is a concentric arc
  Vec2 arc_center{0, 0};
  double arc_radius = 0.0;
  std::optional<CornerProjection> corner;
};

// Projection of a collar point; fills the corner data when the point sees
// two interface segments within delta.
BoundaryProjection project_to_interface(const Vec2& x, const DomainSpec& dom, double delta);

// Level-set contour through x at signed arclength l.
Vec2 contour_point(const BoundaryProjection& bp, double l);
// True when the contour x_l, |l| <= reach, leaves the closed domain.
bool contour_truncated(const BoundaryProjection& bp, const DomainSpec& dom, double reach);

// Uniform spatial hash for radius queries.
class PointIndex {
 public:
  PointIndex() = default;
  PointIndex(const std::vector<Vec2>& pts, double cell);
  // indices j with |pts[j] - x| < r (strict) in ascending order
  std::vector<int> query(const Vec2& x, double r) const;

 private:
  std::vector<Vec2> pts_;
  double cell_ = 1.0;
  Vec2 lo_;
  int nx_ = 0, ny_ = 0;
  std::vector<std::vector<int>> bins_;
};

// ---- local meshes ----

enum class NodeTag { interior, gamma_i, gamma_d };

struct TriMesh {
  std::vector<Vec2> nodes;
  std::vector<NodeTag> tags;
  std::vector<std::array<int, 3>> tris;
  double h = 0.0;
  double area(int t) const;
};

struct LocalDomain {
  Shape outer = Shape::rectangle;
  Vec2 lo{1, 0}, hi{2, 1};
  // hole carved out of the outer box (nonlocal part); square hole means the
  // left edge of the rectangle is the interface instead
  std::optional<DomainSpec> hole;
  bool left_edge_interface = false;
};

LocalDomain line_local();    // [1,2]x[0,1], interface x = 1
LocalDomain circle_local();  // [-2,2]^2 minus unit disk
LocalDomain cross_local();   // [-2,2]^2 minus the cross

TriMesh generate_mesh(const LocalDomain& dom, double h);
TriMesh unit_square_mesh(int n);

void write_mesh(const TriMesh& m, const std::string& path);
TriMesh read_mesh(const std::string& path);

}  // namespace nlc
