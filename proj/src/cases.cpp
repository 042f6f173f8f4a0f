#include "nlc/cases.hpp"

#include <cmath>
#include <stdexcept>

namespace nlc {

AnalyticField field_sincos(int tpow) {
  auto tau = [tpow](double t) { return tpow == 1 ? t : t * t; };
  auto dtau = [tpow](double t) { return tpow == 1 ? 1.0 : 2.0 * t; };
  AnalyticField f;
  f.u = [=](const Vec2& x, double t) { return tau(t) * std::sin(x.x()) * std::cos(x.y()); };
  f.ut = [=](const Vec2& x, double t) { return dtau(t) * std::sin(x.x()) * std::cos(x.y()); };
  f.grad = [=](const Vec2& x, double t) {
    return Vec2(tau(t) * std::cos(x.x()) * std::cos(x.y()), -tau(t) * std::sin(x.x()) * std::sin(x.y()));
  };
  f.hess = [=](const Vec2& x, double t) {
    double s = std::sin(x.x()) * std::cos(x.y()), c = std::cos(x.x()) * std::sin(x.y());
    Mat2 H;
    H << -s, -c, -c, -s;
    return Mat2(tau(t) * H);
  };
  return f;
}

AnalyticField field_poly_x(int p) {
  AnalyticField f;
  if (p == 1) {
    f.u = [](const Vec2& x, double) { return x.x(); };
    f.grad = [](const Vec2&, double) { return Vec2(1, 0); };
    f.hess = [](const Vec2&, double) { return Mat2(Mat2::Zero()); };
  } else if (p == 2) {
    f.u = [](const Vec2& x, double) { return x.x() * x.x(); };
    f.grad = [](const Vec2& x, double) { return Vec2(2 * x.x(), 0); };
    f.hess = [](const Vec2&, double) {
      Mat2 H;
      H << 2, 0, 0, 0;
      return H;
    };
  } else {
    throw std::invalid_argument("field_poly_x: p must be 1 or 2");
  }
  f.ut = [](const Vec2&, double) { return 0.0; };
  return f;
}

namespace {

AnalyticField field_tx4() {
  AnalyticField f;
  f.u = [](const Vec2& x, double t) { return t * std::pow(x.x(), 4); };
  f.ut = [](const Vec2& x, double) { return std::pow(x.x(), 4); };
  f.grad = [](const Vec2& x, double t) { return Vec2(4 * t * std::pow(x.x(), 3), 0); };
  f.hess = [](const Vec2& x, double t) {
    Mat2 H;
    H << 12 * t * x.x() * x.x(), 0, 0, 0;
    return H;
  };
  return f;
}

AnalyticField field_t3x2m2x() {
  AnalyticField f;
  f.u = [](const Vec2& x, double t) { return t * (3 * x.x() * x.x() - 2 * x.x()); };
  f.ut = [](const Vec2& x, double) { return 3 * x.x() * x.x() - 2 * x.x(); };
  f.grad = [](const Vec2& x, double t) { return Vec2(t * (6 * x.x() - 2), 0); };
  f.hess = [](const Vec2&, double t) {
    Mat2 H;
    H << 6 * t, 0, 0, 0;
    return H;
  };
  return f;
}

AnalyticField field_tr2() {
  AnalyticField f;
  f.u = [](const Vec2& x, double t) { return t * x.squaredNorm(); };
  f.ut = [](const Vec2& x, double) { return x.squaredNorm(); };
  f.grad = [](const Vec2& x, double t) { return Vec2(2 * t * x); };
  f.hess = [](const Vec2&, double t) { return Mat2(2 * t * Mat2::Identity()); };
  return f;
}

AnalyticField field_r4() {
  AnalyticField f;
  f.u = [](const Vec2& x, double t) {
    double r2 = x.squaredNorm();
    return t * (r2 * r2 + 1) / 2;
  };
  f.ut = [](const Vec2& x, double) {
    double r2 = x.squaredNorm();
    return (r2 * r2 + 1) / 2;
  };
  f.grad = [](const Vec2& x, double t) { return Vec2(2 * t * x.squaredNorm() * x); };
  f.hess = [](const Vec2& x, double t) {
    return Mat2(t * (2 * x.squaredNorm() * Mat2::Identity() + 4 * x * x.transpose()));
  };
  return f;
}

ScalarFn sc_load(double a, double b, int tpow_b) {
  // (a t^0-ish) combos: returns (a + b t^tpow_b)-style factor times sin x cos y
  return [=](const Vec2& x, double t) {
    return (a + b * std::pow(t, tpow_b)) * std::sin(x.x()) * std::cos(x.y());
  };
}

ScalarFn sc_load_t(double a, double b) {
  // (a t + b t^2) sin x cos y
  return [=](const Vec2& x, double t) { return (a * t + b * t * t) * std::sin(x.x()) * std::cos(x.y()); };
}

}  // namespace

CoupledData ManufacturedCase::coupled_data() const {
  CoupledData d;
  d.f_nl = f_nl;
  d.f_l = f_l;
  d.uD_nl = u0.u;
  d.uD_l = ul.u;
  auto a = u0.u, b = ul.u;
  d.uIC_nl = [a](const Vec2& x, double) { return a(x, 0.0); };
  d.uIC_l = [b](const Vec2& x, double) { return b(x, 0.0); };
  d.exact_nl = u0.u;
  d.exact_l = ul.u;
  return d;
}

ManufacturedCase registry_case(const std::string& id, const std::string& variant) {
  ManufacturedCase c;
  c.id = id;
  c.variant = variant;
  const bool hom = variant == "homogeneous";
  if (!hom && variant != "heteroA" && variant != "heteroB")
    throw std::invalid_argument("unknown variant '" + variant + "'");
  auto bc_common = [&](DomainSpec d, double ratio) {
    if (!hom) throw std::invalid_argument(id + " has only the homogeneous variant");
    c.domain = std::move(d);
    c.ratio = ratio;
    c.dt_coef = 100.0;
    c.u0 = field_sincos(2);
    c.f_nl = sc_load_t(2.0, 2.0);
    c.note = "g = beta u0 + du0/dn on the interface";
  };
  if (id == "bc-square") {
    bc_common(square_nonlocal(), 3.9);
    c.note = "g = beta t^2 sin(1) cos(y) + t^2 cos(1) cos(y)";
  } else if (id == "bc-circle") {
    bc_common(disk_nonlocal(), 3.9);
  } else if (id == "bc-cross") {
    bc_common(cross_nonlocal(), 3.5);
  } else if (id == "patch-linear" || id == "patch-quadratic") {
    if (!hom) throw std::invalid_argument(id + " has only the homogeneous variant");
    c.domain = square_nonlocal();
    int p = id == "patch-linear" ? 1 : 2;
    c.u0 = field_poly_x(p);
    double fv = p == 1 ? 0.0 : -2.0 * c.alpha_nl;
    c.f_nl = [fv](const Vec2&, double) { return fv; };
    c.beta_h = 0.5;  // beta = 10 at h = 1/20
    c.dt_coef = 100.0;
  } else if (id == "ltn-patch-linear" || id == "ltn-patch-quadratic") {
    if (!hom) throw std::invalid_argument(id + " has only the homogeneous variant");
    c.coupled = true;
    c.domain = square_nonlocal();
    c.local = line_local();
    int p = id == "ltn-patch-linear" ? 1 : 2;
    c.u0 = c.ul = field_poly_x(p);
    double fv = p == 1 ? 0.0 : -2.0;
    c.f_nl = c.f_l = [fv](const Vec2&, double) { return fv; };
    c.beta_h = 0.3;
    c.dt_coef = 10.0;
  } else if (id == "ltn-line") {
    c.coupled = true;
    c.domain = square_nonlocal();
    c.local = line_local();
    c.dt_coef = 10.0;
    c.ratio = 3.9;
    if (hom) {
      c.u0 = c.ul = field_sincos(1);
      c.f_nl = c.f_l = sc_load(1.0, 2.0, 1);
      c.beta_h = 0.3;
    } else {
      c.alpha_l = 2.0;
      c.beta_h = 0.4;
      if (variant == "heteroA") {
        c.u0 = c.ul = field_sincos(1);
        c.f_nl = sc_load(1.0, 2.0, 1);
        c.f_l = sc_load(1.0, 4.0, 1);
      } else {
        c.u0 = field_tx4();
        c.ul = field_t3x2m2x();
        c.f_nl = [](const Vec2& x, double t) { return x.x() * x.x() * (x.x() * x.x() - 12 * t); };
        c.f_l = [](const Vec2& x, double t) { return 3 * x.x() * x.x() - 2 * x.x() - 12 * t; };
      }
    }
  } else if (id == "ltn-circle") {
    c.coupled = true;
    c.domain = disk_nonlocal();
    c.local = circle_local();
    c.dt_coef = 10.0;
    c.ratio = 3.9;
    c.beta_h = 0.0;
    if (hom) {
      c.u0 = c.ul = field_sincos(1);
      c.f_nl = c.f_l = sc_load(1.0, 2.0, 1);
    } else {
      c.alpha_l = 10.0;
      if (variant == "heteroA") {
        c.u0 = c.ul = field_sincos(1);
        c.f_nl = sc_load(1.0, 2.0, 1);
        c.f_l = sc_load(1.0, 20.0, 1);
      } else {
        c.u0 = field_tr2();
        c.ul = field_r4();
        c.f_nl = [](const Vec2& x, double t) { return x.squaredNorm() - 4 * t; };
        c.f_l = [](const Vec2& x, double t) {
          double r2 = x.squaredNorm();
          return (r2 * r2 + 1) / 2 - 80 * t * r2;
        };
      }
    }
  } else if (id == "ltn-cross") {
    c.coupled = true;
    c.domain = cross_nonlocal();
    c.local = cross_local();
    c.dt_coef = 100.0;
    c.ratio = 3.5;
    c.beta_h = 0.2;
    c.u0 = c.ul = field_sincos(2);
    c.f_nl = sc_load_t(2.0, 2.0);
    if (hom) {
      c.f_l = sc_load_t(2.0, 2.0);
    } else if (variant == "heteroA") {
      c.alpha_l = 0.1;
      c.f_l = sc_load_t(2.0, 0.2);
    } else {
      throw std::invalid_argument("ltn-cross has variants homogeneous and heteroA");
    }
  } else {
    throw std::invalid_argument("unknown case id '" + id + "'");
  }
  return c;
}

std::vector<std::pair<std::string, std::string>> case_list() {
  return {{"bc-square", "homogeneous"},        {"bc-circle", "homogeneous"},
          {"bc-cross", "homogeneous"},         {"patch-linear", "homogeneous"},
          {"patch-quadratic", "homogeneous"},  {"ltn-patch-linear", "homogeneous"},
          {"ltn-patch-quadratic", "homogeneous"}, {"ltn-line", "homogeneous"},
          {"ltn-line", "heteroA"},             {"ltn-line", "heteroB"},
          {"ltn-circle", "homogeneous"},       {"ltn-circle", "heteroA"},
          {"ltn-circle", "heteroB"},           {"ltn-cross", "homogeneous"},
          {"ltn-cross", "heteroA"}};
}

}  // namespace nlc
