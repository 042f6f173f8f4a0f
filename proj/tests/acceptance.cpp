// Acceptance run: one PASS/FAIL line per criterion, thresholds fixed below.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlc/cases.hpp"
#include "nlc/experiments.hpp"
#include "nlc/linalg.hpp"
#include "nlc/stability.hpp"

using namespace nlc;

namespace {

constexpr double kBcSlope = 1.8;
constexpr double kBcSeconds = 300.0;
constexpr double kPatchTol = 1e-11;
constexpr double kTableL2 = 6.86e-3, kTableInf = 1.98e-2, kTableRel = 0.30;
constexpr double kRateLo = 0.9, kRateHi = 1.2;
constexpr double kCoupledSlope = 0.9;
constexpr double kSweepSeconds = 600.0;
constexpr int kDenseLimit = 4000;

const std::vector<double> kHs{0.1, 0.05, 0.025, 0.0125};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

void bc_suite(Outcome& o, const char* id) {
  for (const char* rule : {"0", "10", "1/h"}) {
    auto t0 = Clock::now();
    auto tab = run_convergence(registry_case(id), kHs, BetaRule::parse(rule));
    double secs = since(t0);
    o.require(tab.slope_inf_nl >= kBcSlope && tab.slope_l2_nl >= kBcSlope && !tab.any_diverged(),
              std::string("beta=") + rule + " slopes inf/L2 " + fmt(tab.slope_inf_nl) + "/" + fmt(tab.slope_l2_nl));
    o.require(secs <= kBcSeconds, std::string("beta=") + rule + " " + fmt(secs) + "s");
  }
}

void c1(Outcome& o) { bc_suite(o, "bc-square"); }
void c2(Outcome& o) { bc_suite(o, "bc-circle"); }
void c3(Outcome& o) { bc_suite(o, "bc-cross"); }

void c4(Outcome& o) {
  for (const char* id : {"patch-linear", "patch-quadratic"}) {
    auto r = run_standalone(registry_case(id), 0.05, 10.0);
    o.require(r.err_inf <= kPatchTol && !r.diverged, std::string(id) + " Linf " + fmt(r.err_inf));
  }
}

void c5(Outcome& o) {
  RunOptions opt;
  opt.steps = 100;
  auto r = run_coupled_case(registry_case("ltn-patch-linear"), 0.05, 6.0, opt);
  o.require(r.steps == 100, "steps " + std::to_string(r.steps));
  o.require(std::max(r.err_inf_nl, r.err_inf_l) <= kPatchTol && !r.diverged,
            "Linf nl/l " + fmt(r.err_inf_nl) + "/" + fmt(r.err_inf_l));
}

void c6(Outcome& o) {
  RunOptions opt;
  opt.mode = GradientMode::element;
  auto tab = run_convergence(registry_case("ltn-patch-quadratic"), kHs, BetaRule::parse("0.3/h"), opt);
  const auto& r0 = tab.rows.front();
  o.require(std::abs(r0.err_l2_nl / kTableL2 - 1) <= kTableRel, "L2 at 1/10 " + fmt(r0.err_l2_nl));
  o.require(std::abs(r0.err_inf_nl / kTableInf - 1) <= kTableRel, "Linf at 1/10 " + fmt(r0.err_inf_nl));
  for (size_t k = 1; k < tab.rows.size(); ++k) {
    const auto& r = tab.rows[k];
    for (double rate : {r.rate_l2_nl, r.rate_inf_nl, r.rate_l2_l, r.rate_inf_l})
      o.require(rate >= kRateLo && rate <= kRateHi, "rate h=" + fmt(r.h) + " " + fmt(rate));
  }
  // informational: L2 as a mean over the (1/h + 1)^2 points of the closed square
  std::string rms = "info: lattice-mean L2";
  for (const auto& r : tab.rows) rms += " " + fmt(r.err_l2_nl / (1.0 + r.h));
  o.detail << "; " << rms;
}

void c7(Outcome& o) {
  auto c = registry_case("ltn-line");
  auto tab = run_convergence(c, kHs, BetaRule::parse("0.3/h"));
  o.require(tab.slope_inf_nl >= kCoupledSlope, "slope beta=3/(10h) " + fmt(tab.slope_inf_nl));
  auto r = run_coupled_case(c, 0.05, 0.0);
  double rho = amplification_factor(build_coupled_system(c, 0.05, 0.0), kDenseLimit);
  o.require(r.diverged, std::string("beta=0 h=1/20 diverged=") + (r.diverged ? "yes" : "no"));
  o.require(rho > 1.0, "beta=0 h=1/20 rho " + fmt(rho));
}

void sweep(Outcome& o, const char* id, const char* variant, double h, double want, double tol) {
  auto t0 = Clock::now();
  auto rep = run_stability_sweep(registry_case(id, variant), h, {}, -1.0, kDenseLimit);
  double secs = since(t0);
  bool ok = std::abs(rep.beta_star - want) <= tol;
  o.require(ok, std::string(id) + "/" + variant + " h=" + fmt(h) + " beta*=" + fmt(rep.beta_star) + " (want " +
                    fmt(want) + "+-" + fmt(tol) + ", rho*=" + fmt(rep.rho_star) + ")");
  o.require(secs <= kSweepSeconds, fmt(secs) + "s");
}

void c8(Outcome& o) {
  sweep(o, "ltn-line", "homogeneous", 0.1, 3.0, 1.0);
  sweep(o, "ltn-line", "homogeneous", 0.05, 6.0, 2.0);
  // the argmin is a grid point; "0" means the first grid point
  sweep(o, "ltn-circle", "homogeneous", 0.1, 0.0, 0.0);
  sweep(o, "ltn-circle", "heteroA", 0.1, 0.0, 0.0);
  sweep(o, "ltn-cross", "homogeneous", 0.1, 2.0, 1.0);
  sweep(o, "ltn-cross", "heteroA", 0.1, 2.0, 1.0);
  sweep(o, "ltn-line", "heteroA", 0.1, 4.0, 1.0);
}

void c9(Outcome& o) {
  struct Item { const char* id; const char* variant; bool unstable_at_zero; };
  for (Item it : {Item{"ltn-line", "heteroA", true}, Item{"ltn-line", "heteroB", true},
                  Item{"ltn-circle", "heteroA", false}, Item{"ltn-circle", "heteroB", false},
                  Item{"ltn-cross", "heteroA", true}}) {
    auto c = registry_case(it.id, it.variant);
    BetaRule rule = c.beta_h > 0 ? BetaRule::parse(fmt(c.beta_h) + "/h") : BetaRule::parse("0");
    auto tab = run_convergence(c, kHs, rule);
    std::string tag = std::string(it.id) + "/" + it.variant;
    o.require(tab.slope_inf_nl >= kCoupledSlope && !tab.any_diverged(),
              tag + " beta=" + rule.str() + " slope " + fmt(tab.slope_inf_nl));
    if (it.unstable_at_zero) {
      auto z = run_convergence(c, kHs, BetaRule::parse("0"));
      o.require(z.any_diverged(), tag + std::string(" beta=0 diverged=") + (z.any_diverged() ? "yes" : "no"));
    }
  }
}

void c10(Outcome& o) {
  // the property suites live in the unit-test binary
  const char* filter =
      "*moments*,*MLS rows*,*reproduces quadratics*,*flat*,*corner point*,*Lambda times*,*power growth*,"
      "*maximum principle*";
  std::string cmd = std::string(NLC_UNIT_TESTS) + " --test-case=\"" + filter + "\" --no-intro --minimal";
  int rc = std::system(cmd.c_str());
  o.require(rc == 0, "unit property cases exit " + std::to_string(rc));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria (1-10)");
  CLI11_PARSE(app, argc, argv);
  std::set<int> sel(only.begin(), only.end());

  std::vector<std::pair<const char*, std::function<void(Outcome&)>>> all{
      {"standalone square convergence", c1},  {"standalone circle convergence", c2},
      {"standalone cross convergence", c3},   {"standalone patch tests", c4},
      {"coupled linear patch", c5},           {"coupled quadratic patch table", c6},
      {"line coupling, beta rule and beta=0", c7}, {"optimal beta reproduction", c8},
      {"heterogeneous convergence", c9},      {"property suites", c10}};

  std::printf("eigenvalue backend: %s\n", eigen_backend_name().c_str());
  int failed = 0;
  for (size_t k = 0; k < all.size(); ++k) {
    int id = static_cast<int>(k) + 1;
    if (!sel.empty() && !sel.count(id)) continue;
    Outcome o;
    auto t0 = Clock::now();
    try {
      all[k].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("%s [%d] %s (%.0fs): %s\n", o.pass ? "PASS" : "FAIL", id, all[k].first, since(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
