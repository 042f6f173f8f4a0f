#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlc/experiments.hpp"

using namespace nlc;

namespace {

struct Common {
  std::string case_id = "bc-square", variant = "homogeneous";
  std::vector<double> h = {0.1, 0.05};
  double ratio = 0.0, dt_coef = 0.0, T = -1.0;
  std::string beta = "0";
  std::string out;
  std::string mode = "mls";
  int steps = -1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--case", c.case_id, "case id (see case-list)");
  sub->add_option("--variant", c.variant, "homogeneous | heteroA | heteroB");
  sub->add_option("--h", c.h, "grid spacings, e.g. --h 0.1 0.05 0.025")->delimiter(',');
  sub->add_option("--ratio", c.ratio, "delta/h (default: case value)");
  sub->add_option("--beta", c.beta, "Robin coefficient rule: 0, 10, 3/h, 0.3/h, or case (registry default)");
  sub->add_option("--dt-coef", c.dt_coef, "dt = coef h^2 (default: case value)");
  sub->add_option("--T", c.T, "final time (default 1)");
  sub->add_option("--steps", c.steps, "number of steps (overrides --T)");
  sub->add_option("--out", c.out, "output directory for CSV/JSON files");
  sub->add_option("--mode", c.mode, "interface gradient extraction: mls | element")
      ->check(CLI::IsMember({"mls", "element"}));
}

RunOptions options(const Common& c) {
  RunOptions o;
  o.ratio = c.ratio;
  o.dt_coef = c.dt_coef;
  o.T = c.T;
  o.steps = c.steps;
  o.mode = c.mode == "element" ? GradientMode::element : GradientMode::mls;
  return o;
}

void write_file(const std::string& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream f(dir + "/" + name);
  f << text;
}

void print_table(const ConvergenceTable& t) {
  std::cout << "# " << t.label << "\n" << t.csv();
  std::cout << "slope_inf_nl=" << t.slope_inf_nl << " slope_l2_nl=" << t.slope_l2_nl;
  if (std::isfinite(t.slope_inf_l)) std::cout << " slope_inf_l=" << t.slope_inf_l << " slope_l2_l=" << t.slope_l2_l;
  std::cout << "\n";
}

std::string tag(const Common& c) {
  std::string b = c.beta;
  for (auto& ch : b)
    if (ch == '/') ch = '_';
  return c.case_id + "_" + c.variant + "_beta" + b;
}

// "case" selects the registry default beta_h / h
BetaRule resolve_beta(const std::string& s, const ManufacturedCase& mc) {
  if (s != "case") return BetaRule::parse(s);
  BetaRule r;
  if (mc.beta_h != 0.0) {
    r.kind = BetaRule::Kind::over_h;
    r.c = mc.beta_h;
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-to-nonlocal heat coupling: convergence, patch and stability experiments"};
  app.set_help_flag("--help", "print help");
  app.set_config("--config", "", "key = value configuration file");
  app.require_subcommand(1);

  Common bc, patch, cpl, sweep;
  double min_slope = -INFINITY, max_err = INFINITY;
  double beta_max = -1.0;
  int dense_limit = 4000;
  double expect_beta = NAN, expect_tol = 0.0;

  auto* s_bc = app.add_subcommand("bc-convergence", "standalone nonlocal refinement study");
  add_common(s_bc, bc);
  s_bc->add_option("--min-slope", min_slope, "fail unless both fitted slopes reach this value");

  auto* s_patch = app.add_subcommand("patch-test", "linear/quadratic patch tests (standalone or coupled)");
  patch.case_id = "patch-linear";
  patch.h = {0.05};
  patch.beta = "case";
  add_common(s_patch, patch);
  s_patch->add_option("--max-err", max_err, "fail if the max error exceeds this value");

  auto* s_cpl = app.add_subcommand("couple", "coupled local-nonlocal runs");
  cpl.case_id = "ltn-line";
  cpl.beta = "case";
  add_common(s_cpl, cpl);
  s_cpl->add_option("--min-slope", min_slope, "fail unless the nonlocal L-infinity slope reaches this value");

  auto* s_sweep = app.add_subcommand("stability-sweep", "amplification factor versus beta");
  sweep.case_id = "ltn-line";
  sweep.h = {0.1};
  add_common(s_sweep, sweep);
  s_sweep->add_option("--beta-max", beta_max, "upper end of the coarse grid (default 50/h)");
  s_sweep->add_option("--dense-limit", dense_limit, "maximum size of the dense amplification matrix");
  s_sweep->add_option("--expect-beta", expect_beta, "fail unless beta* lies within --expect-tol of this value");
  s_sweep->add_option("--expect-tol", expect_tol, "tolerance for --expect-beta");

  app.add_subcommand("case-list", "list registered cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("case-list")) {
      for (auto& [id, v] : case_list()) {
        auto c = registry_case(id, v);
        std::cout << id << " " << v << " coupled=" << c.coupled << " alpha_nl=" << c.alpha_nl
                  << " alpha_l=" << c.alpha_l << " ratio=" << c.ratio << " dt_coef=" << c.dt_coef
                  << " beta=" << c.beta_h << "/h\n";
      }
      return 0;
    }
    if (s_bc->parsed() || s_cpl->parsed()) {
      const Common& c = s_bc->parsed() ? bc : cpl;
      auto mc = registry_case(c.case_id, c.variant);
      RunOptions o = options(c);
      if (!c.out.empty()) o.snapshot_dir = c.out + "/snapshots";
      auto tab = run_convergence(mc, c.h, resolve_beta(c.beta, mc), o);
      print_table(tab);
      write_file(c.out, tag(c) + ".csv", tab.csv());
      if (s_bc->parsed() && !(tab.slope_inf_nl >= min_slope && tab.slope_l2_nl >= min_slope)) return 2;
      if (s_cpl->parsed() && !(tab.slope_inf_nl >= min_slope)) return 2;
      return 0;
    }
    if (s_patch->parsed()) {
      auto mc = registry_case(patch.case_id, patch.variant);
      RunOptions o = options(patch);
      BetaRule br = resolve_beta(patch.beta, mc);
      std::ostringstream csv;
      csv << run_csv_header() << "\n";
      double worst = 0.0;
      for (double h : patch.h) {
        RunReport r;
        if (mc.coupled) {
          r = run_coupled_case(mc, h, br.eval(h), o);
        } else {
          auto s = run_standalone(mc, h, br.eval(h), o);
          r.h = s.h;
          r.delta = s.delta;
          r.dt = s.dt;
          r.beta = s.beta;
          r.err_inf_nl = s.err_inf;
          r.err_l2_nl = s.err_l2;
          r.err_inf_l = r.err_l2_l = 0.0;
          r.diverged = s.diverged;
        }
        csv << run_csv_row(r) << "\n";
        worst = std::max({worst, r.err_inf_nl, r.err_inf_l});
      }
      std::cout << csv.str();
      write_file(patch.out, tag(patch) + ".csv", csv.str());
      return worst <= max_err ? 0 : 2;
    }
    if (s_sweep->parsed()) {
      auto mc = registry_case(sweep.case_id, sweep.variant);
      RunOptions o = options(sweep);
      nlohmann::json all = nlohmann::json::array();
      bool ok = true;
      for (double h : sweep.h) {
        auto rep = run_stability_sweep(mc, h, o, beta_max, dense_limit);
        std::ostringstream name;
        name << sweep.case_id << "_" << sweep.variant << "_h" << h;
        write_file(sweep.out, name.str() + "_rho.csv", report_csv(rep));
        auto j = nlohmann::json::parse(report_json(rep));
        all.push_back(j);
        std::cout << "h=" << h << " beta*=" << rep.beta_star << " rho*=" << rep.rho_star << "\n";
        if (std::isfinite(expect_beta) && std::abs(rep.beta_star - expect_beta) > expect_tol) ok = false;
      }
      write_file(sweep.out, sweep.case_id + "_" + sweep.variant + "_summary.json", all.dump(2));
      return ok ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
