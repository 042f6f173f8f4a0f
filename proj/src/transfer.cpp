#include "nlc/transfer.hpp"

#include <exception>
#include <iostream>

namespace nlc {

namespace {
void push(std::vector<Triplet>& t, int row, const SparseRow& r, double scale = 1.0) {
  for (size_t q = 0; q < r.cols.size(); ++q) t.emplace_back(row, r.cols[q], scale * r.vals[q]);
}
}  // namespace

void build_robin_extraction(const NonlocalSystem& nl, const FemSystem& fem, GradientMode mode,
                            TransferOperators& out, bool parallel) {
  const auto& mesh = fem.mesh;
  const int ns = static_cast<int>(nl.slots.size());
  const int nn = static_cast<int>(mesh.nodes.size());
  const double radius = std::max(nl.cloud.delta, 3.0 * mesh.h);
  out.mode = mode;
  out.g_radius = radius;
  PointIndex index(mesh.nodes, radius);
  PointLocator loc(mesh);
  std::vector<SparseRow> rn(ns), rt(ns);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (int q = 0; q < ns; ++q) {
    try {
      const auto& s = nl.slots[q];
      if (s.kind == RobinSlot::Kind::value && mode == GradientMode::element) {
        rn[q] = element_gradient_row(loc, s.point, s.normal);
        rt[q] = element_value_row(loc, s.point);
        continue;
      }
      MlsRow m = mls_row(mesh.nodes, index, s.point, radius);
      if (s.kind == RobinSlot::Kind::value) {
        rn[q] = m.derivative(s.normal);
        rt[q] = m.value();
      } else {
        rn[q] = m.second(s.normal, s.tangent);
        rt[q] = m.derivative(s.tangent);
      }
    } catch (const std::exception& e) {
#pragma omp critical(transfer_error)
      if (!err)
        err = std::make_exception_ptr(UnisolvencyError("Robin extraction at slot " + std::to_string(q) + " (" +
                                                       std::to_string(nl.slots[q].point.x()) + ", " +
                                                       std::to_string(nl.slots[q].point.y()) + "): " + e.what()));
    }
  }
  if (err) std::rethrow_exception(err);
  std::vector<Triplet> tn, tt;
  for (int q = 0; q < ns; ++q) {
    push(tn, q, rn[q]);
    push(tt, q, rt[q]);
  }
  out.Gn = from_triplets(ns, nn, tn);
  out.Gt = from_triplets(ns, nn, tt);
}

void build_dirichlet_trace(const NonlocalSystem& nl, const FemSystem& fem, TransferOperators& out,
                           bool parallel) {
  const auto& pts = nl.cloud.points;
  const double delta = nl.cloud.delta;
  const int ng = static_cast<int>(fem.gamma_i.size());
  PointIndex index(pts, delta);
  std::vector<SparseRow> rows(ng);
  std::vector<char> grown(ng, 0);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (int k = 0; k < ng; ++k) {
    const Vec2& x = fem.mesh.nodes[fem.gamma_i[k]];
    try {
      try {
        rows[k] = mls_row(pts, index, x, delta).value();
      } catch (const UnisolvencyError&) {
        rows[k] = mls_row(pts, index, x, 1.5 * delta).value();
        grown[k] = 1;
      }
    } catch (const std::exception& e) {
#pragma omp critical(transfer_error)
      if (!err)
        err = std::make_exception_ptr(UnisolvencyError("Dirichlet trace at local node " +
                                                       std::to_string(fem.gamma_i[k]) + ": " + e.what()));
    }
  }
  if (err) std::rethrow_exception(err);
  std::vector<Triplet> t;
  out.sigma2_grown = 0;
  for (int k = 0; k < ng; ++k) {
    push(t, fem.gamma_i[k], rows[k]);
    out.sigma2_grown += grown[k];
  }
  if (out.sigma2_grown)
    std::cerr << "note: " << out.sigma2_grown << " interface nodes used the enlarged trace radius 1.5 delta\n";
  out.sigma2_radius = delta;
  out.Sigma2 = from_triplets(static_cast<int>(fem.mesh.nodes.size()), static_cast<int>(pts.size()), t);
}

SpMat build_sigma1(const NonlocalSystem& nl) {
  std::vector<Triplet> t;
  for (size_t q = 0; q < nl.slots.size(); ++q) t.emplace_back(nl.slots[q].row, static_cast<int>(q), nl.slots[q].weight);
  return from_triplets(nl.size(), static_cast<int>(nl.slots.size()), t);
}

TransferOperators build_transfer(const NonlocalSystem& nl, const FemSystem& fem, GradientMode mode, bool parallel) {
  TransferOperators tr;
  build_robin_extraction(nl, fem, mode, tr, parallel);
  build_dirichlet_trace(nl, fem, tr, parallel);
  tr.Sigma1 = build_sigma1(nl);
  return tr;
}

}  // namespace nlc
