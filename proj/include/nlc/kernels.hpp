#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nlc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class KernelFamily { J1_constant, J2_inverse_r };

struct KernelSpec {
  KernelFamily family = KernelFamily::J1_constant;
  double delta = 0.0;
};

// Constant contour profile H(r) = 3/2 on [0,1].
struct ContourKernelSpec {
  double delta = 0.0;
  static constexpr double profile = 1.5;
  static constexpr double C_H = 3.0;
};

double eval_j(const KernelSpec& k, double r);
double eval_h(const ContourKernelSpec& k, double r);

// Raw kernel moments over a region, in z = y - x coordinates:
// m0 = int J, m1 = int J z, m2 = int J z z^T.
struct Moments {
  double m0 = 0.0;
  Vec2 m1 = Vec2::Zero();
  Mat2 m2 = Mat2::Zero();

  Moments operator-(const Moments& o) const { return {m0 - o.m0, m1 - o.m1, m2 - o.m2}; }
  Moments operator+(const Moments& o) const { return {m0 + o.m0, m1 + o.m1, m2 + o.m2}; }
};

Moments full_ball_moments(const KernelSpec& k);

// Cap {|z| < delta, z.n > s}; closed form for J1, polar quadrature for J2.
Moments halfplane_cap_moments(const KernelSpec& k, const Vec2& n, double s);

// Sub-intervals of [0, delta] along direction theta that lie inside the region.
using RayIntervals = std::function<void(double theta, std::vector<std::pair<double, double>>& out)>;

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Legendre in theta, exact radial integration.
// `breaks` are angles where the integrand may be non-smooth.
Moments polar_moments(const KernelSpec& k, const RayIntervals& region, std::vector<double> breaks,
                      double tol = 1e-13);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace nlc
