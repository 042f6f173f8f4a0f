#include <cmath>
#include <random>

#include "doctest.h"
#include "nlc/cases.hpp"
#include "nlc/experiments.hpp"
#include "nlc/stability.hpp"

using namespace nlc;

namespace {

CoupledState random_state(const CoupledSystem& s, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  CoupledState st;
  st.u_nl = Vec(s.nl.size());
  st.u_l = Vec(s.fem.mesh.nodes.size());
  for (int i = 0; i < st.u_nl.size(); ++i) st.u_nl[i] = U(rng);
  for (int i = 0; i < st.u_l.size(); ++i) st.u_l[i] = U(rng);
  return st;
}

}  // namespace

TEST_CASE("Lambda times the state equals one homogeneous coupled step") {
  struct Item { const char* id; const char* variant; double h, beta; };
  for (Item it : {Item{"ltn-line", "homogeneous", 0.1, 3.0}, Item{"ltn-line", "heteroA", 0.1, 0.0},
                  Item{"ltn-cross", "heteroA", 0.1, 1.0}}) {
    CAPTURE(it.id);
    CAPTURE(it.variant);
    CoupledSystem s = build_coupled_system(registry_case(it.id, it.variant), it.h, it.beta);
    Mat lam = build_lambda(s);
    CoupledSolver solver(s);
    for (unsigned seed : {1u, 2u}) {
      CoupledState st = random_state(s, seed);
      // Dirichlet entries are overwritten by the step, so they carry no information
      for (int i = 0; i < st.u_nl.size(); ++i)
        if (s.nl.dirichlet[i]) st.u_nl[i] = 0.0;
      for (int j : s.fem.gamma_d) st.u_l[j] = 0.0;
      Vec x(lam.cols());
      x << st.u_nl, st.u_l;
      Vec y = lam * x;
      CoupledState nx = solver.step(st, nullptr);
      Vec z(lam.cols());
      z << nx.u_nl, nx.u_l;
      CHECK((y - z).lpNorm<Eigen::Infinity>() <= 1e-9 * std::max(1.0, z.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("coupled linear patch is reproduced to round-off") {
  auto c = registry_case("ltn-patch-linear");
  RunOptions o;
  o.steps = 20;
  RunReport r = run_coupled_case(c, 0.1, 6.0, o);
  CHECK_FALSE(r.diverged);
  CHECK(r.steps == 20);
  CHECK(r.err_inf_nl < 1e-11);
  CHECK(r.err_inf_l < 1e-11);
}

TEST_CASE("coupled quadratic patch has a small nonzero error") {
  auto c = registry_case("ltn-patch-quadratic");
  RunOptions o;
  o.steps = 20;
  o.mode = GradientMode::element;
  RunReport r = run_coupled_case(c, 0.1, 3.0, o);
  CHECK_FALSE(r.diverged);
  CHECK(r.err_inf_nl > 1e-6);
  CHECK(r.err_inf_nl < 0.1);
}

TEST_CASE("divergence flag trips at the blow-up threshold") {
  auto c = registry_case("ltn-line");
  CoupledSystem s = build_coupled_system(c, 0.1, 3.0);
  CoupledData d = c.coupled_data();
  RunReport r = run_coupled(s, d, 0.5, 1e-30);
  CHECK(r.diverged);
  CHECK(r.first_bad_step >= 1);
  RunReport ok = run_coupled(s, d, 0.5);
  CHECK_FALSE(ok.diverged);
  CHECK(ok.first_bad_step == -1);
  CHECK(ok.steps == 5);
}

TEST_CASE("cloud L2 of a constant approximates the square root of the area") {
  CoupledSystem s = build_coupled_system(registry_case("ltn-line"), 0.05, 0.0);
  Vec one = Vec::Ones(s.nl.size());
  double l2 = cloud_l2(s.nl, one);
  CHECK(l2 == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("run csv row matches header arity") {
  RunReport r;
  auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(count(run_csv_header()) == count(run_csv_row(r)));
}
