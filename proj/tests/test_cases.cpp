#include <cmath>
#include <random>

#include "doctest.h"
#include "nlc/cases.hpp"
#include "nlc/experiments.hpp"

using namespace nlc;

namespace {

// u_t - alpha Lap u - f at a few points and times
double pde_residual(const AnalyticField& u, double alpha, const ScalarFn& f) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.5, 1.5), T(0.1, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vec2 x(U(rng), U(rng));
    double t = T(rng);
    double r = u.ut(x, t) - alpha * u.hess(x, t).trace() - f(x, t);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double derivative_mismatch(const AnalyticField& u) {
  const double e = 1e-5;
  Vec2 x(0.37, -0.61);
  double t = 0.8;
  Vec2 gx((u.u(x + Vec2(e, 0), t) - u.u(x - Vec2(e, 0), t)) / (2 * e),
          (u.u(x + Vec2(0, e), t) - u.u(x - Vec2(0, e), t)) / (2 * e));
  Mat2 H;
  H.col(0) = (u.grad(x + Vec2(e, 0), t) - u.grad(x - Vec2(e, 0), t)) / (2 * e);
  H.col(1) = (u.grad(x + Vec2(0, e), t) - u.grad(x - Vec2(0, e), t)) / (2 * e);
  double ut = (u.u(x, t + e) - u.u(x, t - e)) / (2 * e);
  return std::max({(gx - u.grad(x, t)).norm(), (H - u.hess(x, t)).norm(), std::abs(ut - u.ut(x, t))});
}

}  // namespace

TEST_CASE("case list covers every experiment") {
  auto list = case_list();
  CHECK(list.size() == 15);
  for (auto& [id, variant] : list) {
    CAPTURE(id);
    CAPTURE(variant);
    auto c = registry_case(id, variant);
    CHECK(c.id == id);
    CHECK(c.ratio > 3.0);
    CHECK(c.dt_coef > 0.0);
  }
  CHECK_THROWS(registry_case("no-such-case"));
}

TEST_CASE("manufactured fields have consistent derivatives") {
  for (auto& [id, variant] : case_list()) {
    CAPTURE(id);
    CAPTURE(variant);
    auto c = registry_case(id, variant);
    CHECK(derivative_mismatch(c.u0) < 1e-6);
    if (c.coupled) CHECK(derivative_mismatch(c.ul) < 1e-6);
  }
}

TEST_CASE("sources solve the local heat equation for the limits") {
  for (auto& [id, variant] : case_list()) {
    CAPTURE(id);
    CAPTURE(variant);
    auto c = registry_case(id, variant);
    CHECK(pde_residual(c.u0, c.alpha_nl, c.f_nl) < 1e-12);
    if (c.coupled) CHECK(pde_residual(c.ul, c.alpha_l, c.f_l) < 1e-12);
  }
}

TEST_CASE("beta rules parse and print") {
  auto a = BetaRule::parse("0.3/h");
  CHECK(a.kind == BetaRule::Kind::over_h);
  CHECK(a.eval(0.1) == doctest::Approx(3.0));
  auto b = BetaRule::parse("/h");
  CHECK(b.eval(0.05) == doctest::Approx(20.0));
  auto c = BetaRule::parse("10");
  CHECK(c.kind == BetaRule::Kind::constant);
  CHECK(c.eval(0.01) == 10.0);
  CHECK(BetaRule::parse("0").kind == BetaRule::Kind::zero);
  CHECK(BetaRule::parse(a.str()).eval(0.2) == doctest::Approx(a.eval(0.2)));
  CHECK_THROWS_AS(BetaRule::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(BetaRule::parse("-1"), std::invalid_argument);
}

TEST_CASE("slope fit recovers a power law and skips non-finite rows") {
  std::vector<double> h{0.1, 0.05, 0.025, 0.0125}, e;
  for (double x : h) e.push_back(3.0 * x * x);
  CHECK(fit_slope(h, e) == doctest::Approx(2.0).epsilon(1e-12));
  e[0] = NAN;
  CHECK(fit_slope(h, e) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("time step and ratio defaults come from the case") {
  auto c = registry_case("ltn-line");
  CHECK(case_dt(c, 0.1, {}) == doctest::Approx(0.1));
  RunOptions o;
  o.dt_coef = 1.0;
  o.ratio = 2.5;
  CHECK(case_dt(c, 0.1, o) == doctest::Approx(0.01));
  CHECK(case_ratio(c, o) == 2.5);
  CHECK(case_ratio(registry_case("bc-cross"), {}) == 3.5);
}
