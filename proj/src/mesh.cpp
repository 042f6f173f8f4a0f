#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "nlc/geometry.hpp"

namespace nlc {

double TriMesh::area(int t) const {
  const Vec2& a = nodes[tris[t][0]];
  const Vec2& b = nodes[tris[t][1]];
  const Vec2& c = nodes[tris[t][2]];
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

LocalDomain line_local() {
  LocalDomain d;
  d.lo = {1, 0};
  d.hi = {2, 1};
  d.left_edge_interface = true;
  return d;
}

LocalDomain circle_local() {
  LocalDomain d;
  d.outer = Shape::square;
  d.lo = {-2, -2};
  d.hi = {2, 2};
  d.hole = disk_nonlocal();
  return d;
}

LocalDomain cross_local() {
  LocalDomain d;
  d.outer = Shape::square;
  d.lo = {-2, -2};
  d.hi = {2, 2};
  d.hole = cross_nonlocal();
  return d;
}

TriMesh generate_mesh(const LocalDomain& dom, double h) {
  const int nx = static_cast<int>(std::lround((dom.hi.x() - dom.lo.x()) / h));
  const int ny = static_cast<int>(std::lround((dom.hi.y() - dom.lo.y()) / h));
  if (nx < 1 || ny < 1) throw GeometryError("mesh: h larger than the domain");
  const double hx = (dom.hi.x() - dom.lo.x()) / nx, hy = (dom.hi.y() - dom.lo.y()) / ny;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Vec2> pos((nx + 1) * (ny + 1));
  std::vector<char> removed(pos.size(), 0), on_hole(pos.size(), 0);
  const DomainSpec* hole = dom.hole ? &*dom.hole : nullptr;
  const double tol = 1e-9 * h;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      Vec2 p(dom.lo.x() + i * hx, dom.lo.y() + j * hy);
      int k = id(i, j);
      if (hole && hole->shape == Shape::disk) {
        Vec2 q = p - hole->center;
        double r = q.norm();
        if (r < hole->radius - 0.5 * h) {
          removed[k] = 1;
        } else if (r <= hole->radius + 0.5 * h) {
          p = hole->center + hole->radius * q / r;
          on_hole[k] = 1;
        }
      } else if (hole) {
        if (hole->inside(p, tol)) {
          if (hole->dist_interface(p) < tol) on_hole[k] = 1;
          else removed[k] = 1;
        }
      }
      pos[k] = p;
    }
  }
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      bool slash = true;
      if (hole && hole->shape == Shape::disk) {
        // keep the diagonal roughly tangential to the circle
        Vec2 q = Vec2(dom.lo.x() + (i + 0.5) * hx, dom.lo.y() + (j + 0.5) * hy) - hole->center;
        slash = std::abs(q.x() + q.y()) <= std::abs(q.x() - q.y());
      }
      std::array<std::array<int, 3>, 2> cand =
          slash ? std::array<std::array<int, 3>, 2>{{{a, b, c}, {a, c, d}}}
                : std::array<std::array<int, 3>, 2>{{{a, b, d}, {b, c, d}}};
      for (auto& t : cand) {
        if (removed[t[0]] || removed[t[1]] || removed[t[2]]) continue;
        if (hole) {
          Vec2 g = (pos[t[0]] + pos[t[1]] + pos[t[2]]) / 3.0;
          if (hole->shape == Shape::disk ? (g - hole->center).norm() < hole->radius : hole->inside(g, 0.0))
            continue;
        }
        tris.push_back(t);
      }
    }
  }
  // compact
  std::vector<int> remap(pos.size(), -1);
  TriMesh m;
  m.h = h;
  for (auto& t : tris)
    for (int& v : t) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(m.nodes.size());
        m.nodes.push_back(pos[v]);
      }
      v = remap[v];
    }
  m.tris = tris;
  // boundary nodes from edges used once
  std::map<std::pair<int, int>, int> edge_count;
  for (auto& t : m.tris)
    for (int e = 0; e < 3; ++e) {
      int u = t[e], v = t[(e + 1) % 3];
      edge_count[{std::min(u, v), std::max(u, v)}]++;
    }
  std::vector<char> bnd(m.nodes.size(), 0);
  for (auto& [e, c] : edge_count)
    if (c == 1) bnd[e.first] = bnd[e.second] = 1;
  m.tags.assign(m.nodes.size(), NodeTag::interior);
  for (size_t k = 0; k < m.nodes.size(); ++k) {
    if (!bnd[k]) continue;
    const Vec2& p = m.nodes[k];
    bool outer = std::abs(p.x() - dom.lo.x()) < tol || std::abs(p.x() - dom.hi.x()) < tol ||
                 std::abs(p.y() - dom.lo.y()) < tol || std::abs(p.y() - dom.hi.y()) < tol;
    if (dom.left_edge_interface) {
      bool left = std::abs(p.x() - dom.lo.x()) < tol && p.y() > dom.lo.y() + tol && p.y() < dom.hi.y() - tol;
      m.tags[k] = left ? NodeTag::gamma_i : NodeTag::gamma_d;
    } else {
      m.tags[k] = outer ? NodeTag::gamma_d : NodeTag::gamma_i;
    }
  }
  for (size_t t = 0; t < m.tris.size(); ++t) {
    double a = m.area(static_cast<int>(t));
    if (!(a > 1e-12 * h * h))
      throw GeometryError("mesh: degenerate triangle " + std::to_string(t) + " after snapping");
  }
  return m;
}

TriMesh unit_square_mesh(int n) {
  LocalDomain d;
  d.lo = {0, 0};
  d.hi = {1, 1};
  return generate_mesh(d, 1.0 / n);
}

void write_mesh(const TriMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GeometryError("mesh: cannot write " + path);
  out.precision(17);
  out << m.nodes.size() << " " << m.tris.size() << "\n";
  for (size_t i = 0; i < m.nodes.size(); ++i)
    out << i << " " << m.nodes[i].x() << " " << m.nodes[i].y() << " " << static_cast<int>(m.tags[i]) << "\n";
  for (size_t t = 0; t < m.tris.size(); ++t)
    out << t << " " << m.tris[t][0] << " " << m.tris[t][1] << " " << m.tris[t][2] << "\n";
}

TriMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("mesh: cannot read " + path);
  size_t nn, nt;
  if (!(in >> nn >> nt)) throw GeometryError("mesh: bad header in " + path);
  TriMesh m;
  m.nodes.resize(nn);
  m.tags.resize(nn);
  m.tris.resize(nt);
  for (size_t i = 0; i < nn; ++i) {
    size_t id;
    double x, y;
    int tag;
    if (!(in >> id >> x >> y >> tag) || id >= nn || tag < 0 || tag > 2)
      throw GeometryError("mesh: bad node line " + std::to_string(i));
    m.nodes[id] = {x, y};
    m.tags[id] = static_cast<NodeTag>(tag);
  }
  for (size_t t = 0; t < nt; ++t) {
    size_t id;
    int a, b, c;
    if (!(in >> id >> a >> b >> c) || id >= nt) throw GeometryError("mesh: bad triangle line " + std::to_string(t));
    m.tris[id] = {a, b, c};
  }
  return m;
}

}  // namespace nlc
