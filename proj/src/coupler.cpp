#include "nlc/coupler.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlc {

CoupledSolver::CoupledSolver(const CoupledSystem& sys)
    : sys_(&sys), nl_(sys.nl, sys.beta, sys.dt), fem_(sys.fem, sys.dt) {}

CoupledState CoupledSolver::step(const CoupledState& s, const CoupledData* data) const {
  const auto& S = *sys_;
  CoupledState next;
  next.k = s.k + 1;
  next.t = s.t + S.dt;
  Vec g, trace;
  try {
    g = S.tr.robin_data(s.u_l, S.beta);  // (a)
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("coupled step (a): ") + e.what());
  }
  try {
    next.u_nl = nl_.step(s.u_nl, data ? data->f_nl : ScalarFn{}, data ? data->uD_nl : ScalarFn{}, g, next.t);  // (b)
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("coupled step (b): ") + e.what());
  }
  trace = S.tr.Sigma2 * next.u_nl;  // (c)
  Vec constrained = Vec::Zero(S.fem.mesh.nodes.size());
  for (int j : S.fem.gamma_i) constrained[j] = trace[j];
  if (data && data->uD_l)
    for (int j : S.fem.gamma_d) constrained[j] = data->uD_l(S.fem.mesh.nodes[j], next.t);
  try {
    next.u_l = fem_.step(s.u_l, data ? data->f_l : ScalarFn{}, constrained, next.t);  // (d)
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("coupled step (d): ") + e.what());
  }
  return next;
}

double cloud_l2(const NonlocalSystem& nl, const Vec& e) {
  double s = 0.0, h2 = nl.cloud.h * nl.cloud.h;
  for (int i = 0; i < nl.size(); ++i)
    if (!nl.dirichlet[i]) s += e[i] * e[i] * h2;
  return std::sqrt(s);
}

RunReport run_coupled(const CoupledSystem& sys, const CoupledData& data, double T, double blowup) {
  RunReport r;
  r.h = sys.nl.cloud.h;
  r.delta = sys.nl.cloud.delta;
  r.dt = sys.dt;
  r.beta = sys.beta;
  CoupledSolver solver(sys);
  CoupledState s;
  s.u_nl = sample(sys.nl.cloud.points, data.uIC_nl, 0.0);
  s.u_l = sample(sys.fem.mesh.nodes, data.uIC_l, 0.0);
  const int nsteps = static_cast<int>(std::llround(T / sys.dt));
  for (int k = 0; k < nsteps; ++k) {
    s = solver.step(s, &data);
    double m = std::max(s.u_nl.cwiseAbs().maxCoeff(), s.u_l.cwiseAbs().maxCoeff());
    if (!std::isfinite(m) || m > blowup) {
      r.diverged = true;
      r.first_bad_step = s.k;
      break;
    }
  }
  r.steps = s.k;
  r.final_state = s;
  if (r.diverged) {
    r.err_inf_nl = r.err_inf_l = r.err_l2_nl = r.err_l2_l = INFINITY;
    return r;
  }
  Vec enl = s.u_nl - sample(sys.nl.cloud.points, data.exact_nl, s.t);
  Vec el = s.u_l - sample(sys.fem.mesh.nodes, data.exact_l, s.t);
  r.err_inf_nl = enl.cwiseAbs().maxCoeff();
  r.err_inf_l = el.cwiseAbs().maxCoeff();
  r.err_l2_nl = cloud_l2(sys.nl, enl);
  r.err_l2_l = fem_l2_error(sys.fem, el);
  return r;
}

std::string run_csv_header() { return "h,delta,dt,beta,err_inf_nl,err_inf_l,err_l2_nl,err_l2_l,diverged"; }

std::string run_csv_row(const RunReport& r) {
  std::ostringstream o;
  o.precision(10);
  o << r.h << ',' << r.delta << ',' << r.dt << ',' << r.beta << ',' << r.err_inf_nl << ',' << r.err_inf_l << ','
    << r.err_l2_nl << ',' << r.err_l2_l << ',' << (r.diverged ? 1 : 0);
  return o.str();
}

}  // namespace nlc
