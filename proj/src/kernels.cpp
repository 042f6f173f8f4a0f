#include "nlc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlc {

double eval_j(const KernelSpec& k, double r) {
  const double d = k.delta;
  if (r < 0) throw std::invalid_argument("eval_j: negative radius");
  if (r > d) return 0.0;
  if (k.family == KernelFamily::J1_constant) return 4.0 / (M_PI * d * d * d * d);
  if (r == 0.0) throw std::domain_error("eval_j: J2 is singular at r = 0");
  return 3.0 / (M_PI * d * d * d * r);
}

double eval_h(const ContourKernelSpec& k, double r) {
  if (r < 0) throw std::invalid_argument("eval_h: negative radius");
  if (r > k.delta) return 0.0;
  return ContourKernelSpec::profile / (k.delta * k.delta * k.delta);
}

Moments full_ball_moments(const KernelSpec& k) {
  const double d = k.delta;
  Moments m;
  // int J = 4/d^2 for J1, 6/d^2 for J2; int J z z^T = I for both
  m.m0 = (k.family == KernelFamily::J1_constant ? 4.0 : 6.0) / (d * d);
  m.m2 = Mat2::Identity();
  return m;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

struct Radial {
  // radial integrals of J r^k r dr between r0 and r1 for k = 0, 1, 2
  double i0, i1, i2;
};

Radial radial(const KernelSpec& k, double r0, double r1) {
  const double d = k.delta;
  if (k.family == KernelFamily::J1_constant) {
    double c = 4.0 / (M_PI * d * d * d * d);
    return {c * (r1 * r1 - r0 * r0) / 2.0, c * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0,
            c * (std::pow(r1, 4) - std::pow(r0, 4)) / 4.0};
  }
  double c = 3.0 / (M_PI * d * d * d);
  return {c * (r1 - r0), c * (r1 * r1 - r0 * r0) / 2.0, c * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0};
}

using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 integrand(const KernelSpec& k, const RayIntervals& region, double th,
               std::vector<std::pair<double, double>>& buf) {
  buf.clear();
  region(th, buf);
  double c = std::cos(th), s = std::sin(th);
  Vec6 v = Vec6::Zero();
  for (auto& [r0, r1] : buf) {
    if (r1 <= r0) continue;
    Radial q = radial(k, r0, r1);
    v[0] += q.i0;
    v[1] += q.i1 * c;
    v[2] += q.i1 * s;
    v[3] += q.i2 * c * c;
    v[4] += q.i2 * c * s;
    v[5] += q.i2 * s * s;
  }
  return v;
}

Vec6 panel(const KernelSpec& k, const RayIntervals& region, double a, double b,
           std::vector<std::pair<double, double>>& buf) {
  static thread_local std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(20, gx, gw);
  Vec6 acc = Vec6::Zero();
  double hm = 0.5 * (b - a), c = 0.5 * (a + b);
  for (size_t q = 0; q < gx.size(); ++q) acc += gw[q] * hm * integrand(k, region, c + hm * gx[q], buf);
  return acc;
}

Vec6 adapt(const KernelSpec& k, const RayIntervals& region, double a, double b, const Vec6& whole,
           const Vec6& scale, double tol, int depth, std::vector<std::pair<double, double>>& buf,
           double& worst) {
  double m = 0.5 * (a + b);
  Vec6 l = panel(k, region, a, m, buf), r = panel(k, region, m, b, buf);
  Vec6 both = l + r;
  double err = ((both - whole).cwiseProduct(scale)).cwiseAbs().maxCoeff();
  if (err <= tol) return both;
  if (depth >= 40) {
    worst = std::max(worst, err);
    return both;
  }
  return adapt(k, region, a, m, l, scale, tol / std::sqrt(2.0), depth + 1, buf, worst) +
         adapt(k, region, m, b, r, scale, tol / std::sqrt(2.0), depth + 1, buf, worst);
}

}  // namespace

Moments polar_moments(const KernelSpec& k, const RayIntervals& region, std::vector<double> breaks,
                      double tol) {
  for (double& b : breaks) {
    b = std::fmod(b, 2.0 * M_PI);
    if (b < 0) b += 2.0 * M_PI;
  }
  breaks.push_back(0.0);
  breaks.push_back(2.0 * M_PI);
  std::sort(breaks.begin(), breaks.end());
  const double d = k.delta;
  Vec6 scale;
  scale << d * d, d, d, 1.0, 1.0, 1.0;
  std::vector<std::pair<double, double>> buf;
  Vec6 total = Vec6::Zero();
  double worst = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    double a = breaks[i], b = breaks[i + 1];
    if (b - a < 1e-15) continue;
    Vec6 whole = panel(k, region, a, b, buf);
    total += adapt(k, region, a, b, whole, scale, tol, 0, buf, worst);
  }
  if (worst > 1e3 * tol)
    throw QuadratureError("polar quadrature did not converge, achieved " + std::to_string(worst));
  Moments m;
  m.m0 = total[0];
  m.m1 = Vec2(total[1], total[2]);
  m.m2 << total[3], total[4], total[4], total[5];
  return m;
}

Moments halfplane_cap_moments(const KernelSpec& k, const Vec2& n, double s) {
  const double d = k.delta;
  if (s >= d) return {};
  if (s < 0) throw std::invalid_argument("halfplane cap: negative offset");
  if (k.family == KernelFamily::J2_inverse_r) {
    double a = std::acos(s / d);
    double phi = std::atan2(n.y(), n.x());
    RayIntervals reg = [&](double th, std::vector<std::pair<double, double>>& out) {
      double c = std::cos(th - phi);
      if (c * d > s) out.emplace_back(s / c, d);
    };
    return polar_moments(k, reg, {phi - a, phi + a});
  }
  const double c = 4.0 / (M_PI * d * d * d * d);
  const double w = std::sqrt(d * d - s * s);
  const double as = std::asin(s / d);
  const double d4 = d * d * d * d;
  double area = d * d * std::acos(s / d) - s * w;
  double zn = (2.0 / 3.0) * w * w * w;
  double znn = 2.0 * (d4 * M_PI / 16.0 - (s * (2 * s * s - d * d) * w / 8.0 + d4 / 8.0 * as));
  double zpp = (2.0 / 3.0) * (3.0 * d4 * M_PI / 16.0 - (s * (5 * d * d - 2 * s * s) * w / 8.0 + 3.0 * d4 / 8.0 * as));
  Vec2 p(n.y(), -n.x());
  Moments m;
  m.m0 = c * area;
  m.m1 = c * zn * n;
  m.m2 = c * (znn * n * n.transpose() + zpp * p * p.transpose());
  return m;
}

}  // namespace nlc
