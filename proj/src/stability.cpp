#include "nlc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>

#include "json.hpp"

namespace nlc {

void lambda_blocks(const CoupledSystem& sys, SpMatC& L, SpMatC& R) {
  const auto& nl = sys.nl;
  const auto& fem = sys.fem;
  const int n = nl.size(), m = static_cast<int>(fem.mesh.nodes.size()), N = n + m;
  std::vector<Triplet> tl, tr;
  SpMatC Anl = nonlocal_operator(nl, sys.beta, sys.dt);
  for (int j = 0; j < Anl.outerSize(); ++j)
    for (SpMatC::InnerIterator it(Anl, j); it; ++it) tl.emplace_back(it.row(), j, it.value());
  // explicit Robin coupling: Sigma1 (Gn + beta Gt)
  SpMat G = sys.tr.Gn + sys.beta * sys.tr.Gt;
  SpMat SG = sys.tr.Sigma1 * G;
  for (int i = 0; i < n; ++i) {
    if (nl.dirichlet[i]) continue;
    tr.emplace_back(i, i, nl.mass[i] / sys.dt);
    for (SpMat::InnerIterator it(SG, i); it; ++it) tr.emplace_back(i, n + it.col(), it.value());
  }
  SpMatC A = SpMatC(fem.M / sys.dt) + fem.B;
  SpMatC Mt = fem.M / sys.dt;
  std::vector<char> is_free(m, 0);
  for (int j : fem.free_nodes) is_free[j] = 1;
  for (int j = 0; j < m; ++j) {
    for (SpMatC::InnerIterator it(A, j); it; ++it)
      if (is_free[it.row()]) tl.emplace_back(n + it.row(), n + j, it.value());
    for (SpMatC::InnerIterator it(Mt, j); it; ++it)
      if (is_free[it.row()]) tr.emplace_back(n + it.row(), n + j, it.value());
  }
  for (int j : fem.gamma_d) tl.emplace_back(n + j, n + j, 1.0);
  for (int j : fem.gamma_i) {
    tl.emplace_back(n + j, n + j, 1.0);
    for (SpMat::InnerIterator it(sys.tr.Sigma2, j); it; ++it) tl.emplace_back(n + j, it.col(), -it.value());
  }
  L.resize(N, N);
  R.resize(N, N);
  L.setFromTriplets(tl.begin(), tl.end());
  R.setFromTriplets(tr.begin(), tr.end());
}

Mat build_lambda(const CoupledSystem& sys, int dense_limit) {
  const int N = sys.nl.size() + static_cast<int>(sys.fem.mesh.nodes.size());
  if (N > dense_limit)
    throw DenseLimitError("Lambda has " + std::to_string(N) + " unknowns, above the dense limit " +
                          std::to_string(dense_limit) + "; use a coarser h and scale beta with h");
  SpMatC L, R;
  lambda_blocks(sys, L, R);
  SparseLU lu(L);
  return lu.solve(Mat(R));
}

std::vector<int> lambda_zero_rows(const CoupledSystem& sys) {
  std::vector<int> z;
  const int n = sys.nl.size();
  for (int i = 0; i < n; ++i)
    if (sys.nl.dirichlet[i]) z.push_back(i);
  for (int j : sys.fem.gamma_d) z.push_back(n + j);
  std::sort(z.begin(), z.end());
  return z;
}

double amplification_factor(const CoupledSystem& sys, int dense_limit) {
  Mat lam = build_lambda(sys, dense_limit);
  std::vector<int> zero = lambda_zero_rows(sys);
  std::vector<char> drop(lam.rows(), 0);
  for (int i : zero) drop[i] = 1;
  std::vector<int> keep;
  for (int i = 0; i < lam.rows(); ++i)
    if (!drop[i]) keep.push_back(i);
  Mat sub(keep.size(), keep.size());
  for (size_t b = 0; b < keep.size(); ++b)
    for (size_t a = 0; a < keep.size(); ++a) sub(a, b) = lam(keep[a], keep[b]);
  return spectral_radius(sub);
}

AmplificationReport evaluate_grid(const RhoFunction& rho, std::vector<double> grid, bool parallel) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  AmplificationReport r;
  r.beta = grid;
  r.rho.assign(grid.size(), NAN);
  std::exception_ptr err;
  const int n = static_cast<int>(grid.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int k = 0; k < n; ++k) {
    try {
      r.rho[k] = rho(grid[k]);
    } catch (...) {
#pragma omp critical(beta_sweep_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  int best = -1;
  for (int k = 0; k < n; ++k) {
    if (!std::isfinite(r.rho[k])) continue;
    if (best < 0 || r.rho[k] < r.rho[best] * (1.0 - 1e-12)) best = k;
  }
  if (best < 0) throw std::runtime_error("optimize_beta: no finite amplification factor on the grid");
  r.beta_star = grid[best];
  r.rho_star = r.rho[best];
  for (int k = 0; k + 1 < n; ++k) {
    double a = r.rho[k] - 1.0, b = r.rho[k + 1] - 1.0;
    if (std::isfinite(a) && std::isfinite(b) && a * b < 0)
      r.crossings.push_back(grid[k] + (grid[k + 1] - grid[k]) * a / (a - b));
  }
  return r;
}

AmplificationReport optimize_beta(const RhoFunction& rho, double beta_max, bool parallel, int coarse, int fine) {
  std::vector<double> grid = {0.0};
  const double bmin = beta_max * 1e-4;
  for (int k = 0; k < coarse - 1; ++k) grid.push_back(bmin * std::pow(beta_max / bmin, double(k) / (coarse - 2)));
  AmplificationReport c = evaluate_grid(rho, grid, parallel);
  auto it = std::find(c.beta.begin(), c.beta.end(), c.beta_star);
  size_t k = static_cast<size_t>(it - c.beta.begin());
  double lo = c.beta[k == 0 ? 0 : k - 1], hi = c.beta[std::min(k + 1, c.beta.size() - 1)];
  std::vector<double> fg;
  for (int q = 0; q < fine; ++q) fg.push_back(lo + (hi - lo) * q / (fine - 1));
  // coarse points already known are not recomputed
  std::vector<double> todo;
  for (double b : fg)
    if (std::find(c.beta.begin(), c.beta.end(), b) == c.beta.end()) todo.push_back(b);
  AmplificationReport f = evaluate_grid(rho, todo, parallel);
  AmplificationReport all;
  std::vector<std::pair<double, double>> pts;
  for (size_t q = 0; q < c.beta.size(); ++q) pts.emplace_back(c.beta[q], c.rho[q]);
  for (size_t q = 0; q < f.beta.size(); ++q) pts.emplace_back(f.beta[q], f.rho[q]);
  std::sort(pts.begin(), pts.end());
  std::vector<double> b2, r2;
  for (auto& [b, r] : pts) {
    b2.push_back(b);
    r2.push_back(r);
  }
  auto table = [&](double b) {
    return r2[std::lower_bound(b2.begin(), b2.end(), b) - b2.begin()];
  };
  return evaluate_grid(table, b2, false);
}

double power_growth(const CoupledSystem& sys, int steps, unsigned seed) {
  CoupledSolver solver(sys);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CoupledState s;
  s.u_nl = Vec(sys.nl.size());
  s.u_l = Vec(sys.fem.mesh.nodes.size());
  for (int i = 0; i < s.u_nl.size(); ++i) s.u_nl[i] = sys.nl.dirichlet[i] ? 0.0 : U(rng);
  for (int i = 0; i < s.u_l.size(); ++i) s.u_l[i] = U(rng);
  auto norm = [](const CoupledState& x) { return std::sqrt(x.u_nl.squaredNorm() + x.u_l.squaredNorm()); };
  // skip transients, then measure the mean growth per step with renormalisation
  const int warm = steps / 2;
  double logsum = 0.0;
  for (int k = 0; k < steps; ++k) {
    double before = norm(s);
    s = solver.step(s, nullptr);
    double after = norm(s);
    if (k >= warm) logsum += std::log(after / before);
    s.u_nl /= after;
    s.u_l /= after;
  }
  return std::exp(logsum / (steps - warm));
}

std::string report_csv(const AmplificationReport& r) {
  std::ostringstream o;
  o.precision(12);
  o << "beta,rho\n";
  for (size_t k = 0; k < r.beta.size(); ++k) o << r.beta[k] << ',' << r.rho[k] << '\n';
  return o.str();
}

std::string report_json(const AmplificationReport& r) {
  nlohmann::json j;
  j["label"] = r.label;
  j["h"] = r.h;
  j["delta"] = r.delta;
  j["dt"] = r.dt;
  j["beta_star"] = r.beta_star;
  j["rho_star"] = r.rho_star;
  j["crossings"] = r.crossings;
  j["grid_size"] = r.beta.size();
  return j.dump(2);
}

}  // namespace nlc
