#include "nlc/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace nlc {

BetaRule BetaRule::parse(const std::string& s) {
  BetaRule r;
  auto slash = s.find("/h");
  try {
    if (slash != std::string::npos) {
      r.kind = Kind::over_h;
      r.c = slash == 0 ? 1.0 : std::stod(s.substr(0, slash));
    } else {
      r.c = std::stod(s);
      r.kind = r.c == 0.0 ? Kind::zero : Kind::constant;
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse beta rule '" + s + "'");
  }
  if (r.c < 0) throw std::invalid_argument("beta must be nonnegative");
  return r;
}

std::string BetaRule::str() const {
  std::ostringstream o;
  if (kind == Kind::zero) return "0";
  o << c;
  if (kind == Kind::over_h) o << "/h";
  return o.str();
}

double case_ratio(const ManufacturedCase& c, const RunOptions& o) { return o.ratio > 0 ? o.ratio : c.ratio; }

double case_dt(const ManufacturedCase& c, double h, const RunOptions& o) {
  return (o.dt_coef > 0 ? o.dt_coef : c.dt_coef) * h * h;
}

namespace {
int step_count(const ManufacturedCase& c, double dt, const RunOptions& o) {
  if (o.steps > 0) return o.steps;
  double T = o.T >= 0 ? o.T : c.T;
  return std::max(1, static_cast<int>(std::llround(T / dt)));
}
}  // namespace

StandaloneReport run_standalone(const ManufacturedCase& c, double h, double beta, const RunOptions& o) {
  StandaloneReport r;
  r.h = h;
  r.delta = case_ratio(c, o) * h;
  r.dt = case_dt(c, h, o);
  r.beta = beta;
  PointCloud cloud = generate_point_cloud(c.domain, h, r.delta);
  NonlocalSystem sys = assemble_nonlocal(cloud, c.domain, {o.kernel, r.delta}, c.alpha_nl, o.parallel);
  NonlocalStepper stepper(sys, beta, r.dt);
  auto u0 = c.u0.u;
  Vec u = sample(cloud.points, [u0](const Vec2& x, double) { return u0(x, 0.0); }, 0.0);
  const int n = step_count(c, r.dt, o);
  double t = 0.0;
  for (int k = 0; k < n; ++k) {
    t = (k + 1) * r.dt;
    Vec g = slot_data_analytic(sys, c.u0, t, beta);
    u = stepper.step(u, c.f_nl, c.u0.u, g, t);
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 1e12) {
      r.diverged = true;
      r.steps = k + 1;
      r.err_inf = r.err_l2 = INFINITY;
      r.u = u;
      return r;
    }
  }
  r.steps = n;
  Vec e = u - sample(cloud.points, c.u0.u, t);
  r.err_inf = e.cwiseAbs().maxCoeff();
  r.err_l2 = cloud_l2(sys, e);
  r.u = u;
  if (!o.snapshot_dir.empty()) {
    std::filesystem::create_directories(o.snapshot_dir);
    std::ostringstream name;
    name << o.snapshot_dir << "/" << c.id << "_h" << h << "_nl.csv";
    write_snapshot_csv(name.str(), cloud.points, u);
  }
  return r;
}

CoupledSystem build_coupled_system(const ManufacturedCase& c, double h, double beta, const RunOptions& o) {
  if (!c.coupled) throw std::invalid_argument(c.id + " is not a coupled case");
  CoupledSystem s;
  const double delta = case_ratio(c, o) * h;
  PointCloud cloud = generate_point_cloud(c.domain, h, delta);
  s.nl = assemble_nonlocal(cloud, c.domain, {o.kernel, delta}, c.alpha_nl, o.parallel);
  s.fem = assemble_fem(generate_mesh(c.local, h), c.alpha_l, o.parallel);
  s.tr = build_transfer(s.nl, s.fem, o.mode, o.parallel);
  s.beta = beta;
  s.dt = case_dt(c, h, o);
  return s;
}

RunReport run_coupled_case(const ManufacturedCase& c, double h, double beta, const RunOptions& o) {
  CoupledSystem s = build_coupled_system(c, h, beta, o);
  double T = step_count(c, s.dt, o) * s.dt;
  RunReport r = run_coupled(s, c.coupled_data(), T);
  if (!o.snapshot_dir.empty()) {
    std::filesystem::create_directories(o.snapshot_dir);
    std::ostringstream base;
    base << o.snapshot_dir << "/" << c.id << "_" << c.variant << "_h" << h << "_beta" << beta;
    write_snapshot_csv(base.str() + "_nl.csv", s.nl.cloud.points, r.final_state.u_nl);
    write_snapshot_csv(base.str() + "_l.csv", s.fem.mesh.nodes, r.final_state.u_l);
  }
  return r;
}

bool ConvergenceTable::any_diverged() const {
  for (auto& r : rows)
    if (r.diverged) return true;
  return false;
}

std::string ConvergenceTable::csv() const {
  std::ostringstream o;
  o.precision(10);
  o << "h,delta,dt,beta,err_inf_nl,err_inf_l,err_l2_nl,err_l2_l,diverged,rate_inf_nl,rate_l2_nl,rate_inf_l,rate_l2_l\n";
  for (auto& r : rows)
    o << r.h << ',' << r.delta << ',' << r.dt << ',' << r.beta << ',' << r.err_inf_nl << ',' << r.err_inf_l << ','
      << r.err_l2_nl << ',' << r.err_l2_l << ',' << (r.diverged ? 1 : 0) << ',' << r.rate_inf_nl << ','
      << r.rate_l2_nl << ',' << r.rate_inf_l << ',' << r.rate_l2_l << '\n';
  return o.str();
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> X, Y;
  for (size_t k = 0; k < h.size(); ++k)
    if (std::isfinite(err[k]) && err[k] > 0) {
      X.push_back(std::log10(h[k]));
      Y.push_back(std::log10(err[k]));
    }
  if (X.size() < 2) return NAN;
  double mx = 0, my = 0;
  for (size_t k = 0; k < X.size(); ++k) {
    mx += X[k];
    my += Y[k];
  }
  mx /= X.size();
  my /= X.size();
  double sxy = 0, sxx = 0;
  for (size_t k = 0; k < X.size(); ++k) {
    sxy += (X[k] - mx) * (Y[k] - my);
    sxx += (X[k] - mx) * (X[k] - mx);
  }
  return sxy / sxx;
}

ConvergenceTable run_convergence(const ManufacturedCase& c, const std::vector<double>& hs, const BetaRule& beta,
                                 const RunOptions& o) {
  ConvergenceTable tab;
  tab.label = c.id + "/" + c.variant + " beta=" + beta.str();
  for (double h : hs) {
    ConvergenceRow row;
    row.h = h;
    row.beta = beta.eval(h);
    if (c.coupled) {
      RunReport r = run_coupled_case(c, h, row.beta, o);
      row.delta = r.delta;
      row.dt = r.dt;
      row.err_inf_nl = r.err_inf_nl;
      row.err_l2_nl = r.err_l2_nl;
      row.err_inf_l = r.err_inf_l;
      row.err_l2_l = r.err_l2_l;
      row.diverged = r.diverged;
    } else {
      StandaloneReport r = run_standalone(c, h, row.beta, o);
      row.delta = r.delta;
      row.dt = r.dt;
      row.err_inf_nl = r.err_inf;
      row.err_l2_nl = r.err_l2;
      row.err_inf_l = row.err_l2_l = NAN;
      row.diverged = r.diverged;
    }
    tab.rows.push_back(row);
  }
  auto rate = [](double e0, double e1, double h0, double h1) { return std::log(e0 / e1) / std::log(h0 / h1); };
  for (size_t k = 1; k < tab.rows.size(); ++k) {
    auto &a = tab.rows[k - 1], &b = tab.rows[k];
    if (a.diverged || b.diverged) continue;
    b.rate_inf_nl = rate(a.err_inf_nl, b.err_inf_nl, a.h, b.h);
    b.rate_l2_nl = rate(a.err_l2_nl, b.err_l2_nl, a.h, b.h);
    b.rate_inf_l = rate(a.err_inf_l, b.err_inf_l, a.h, b.h);
    b.rate_l2_l = rate(a.err_l2_l, b.err_l2_l, a.h, b.h);
  }
  std::vector<double> H, e1, e2, e3, e4;
  for (auto& r : tab.rows) {
    if (r.diverged) continue;
    H.push_back(r.h);
    e1.push_back(r.err_inf_nl);
    e2.push_back(r.err_l2_nl);
    e3.push_back(r.err_inf_l);
    e4.push_back(r.err_l2_l);
  }
  tab.slope_inf_nl = fit_slope(H, e1);
  tab.slope_l2_nl = fit_slope(H, e2);
  tab.slope_inf_l = fit_slope(H, e3);
  tab.slope_l2_l = fit_slope(H, e4);
  return tab;
}

AmplificationReport run_stability_sweep(const ManufacturedCase& c, double h, const RunOptions& o, double beta_max,
                                        int dense_limit) {
  CoupledSystem base = build_coupled_system(c, h, 0.0, o);
  const int N = base.nl.size() + static_cast<int>(base.fem.mesh.nodes.size());
  if (N > dense_limit)
    throw DenseLimitError("stability sweep: " + std::to_string(N) + " unknowns exceed the dense limit " +
                          std::to_string(dense_limit) + "; use a coarser h and scaled_beta");
  if (beta_max <= 0) beta_max = 50.0 / h;
  RhoFunction rho = [&](double b) {
    CoupledSystem s = base;
    s.beta = b;
    return amplification_factor(s, dense_limit);
  };
  AmplificationReport r = optimize_beta(rho, beta_max, o.parallel);
  r.h = h;
  r.delta = base.nl.cloud.delta;
  r.dt = base.dt;
  r.label = c.id + "/" + c.variant;
  return r;
}

}  // namespace nlc
