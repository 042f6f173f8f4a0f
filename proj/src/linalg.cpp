#include "nlc/linalg.hpp"

#include <dlfcn.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

namespace nlc {

void SparseLU::factor(const SpMatC& A) {
  if (A.rows() != A.cols()) throw LinalgError("sparse LU: matrix not square");
  n_ = static_cast<int>(A.rows());
  lu_ = std::make_shared<Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(A);
  lu_->factorize(A);
  if (lu_->info() != Eigen::Success)
    throw LinalgError("sparse LU: numerically singular (" + lu_->lastErrorMessage() + ")");
}

Vec SparseLU::solve(const Vec& b) const {
  if (!lu_) throw LinalgError("sparse LU: not factored");
  Vec x = lu_->solve(b);
  if (lu_->info() != Eigen::Success) throw LinalgError("sparse LU: solve failed");
  return x;
}

Mat SparseLU::solve(const Mat& B) const {
  if (!lu_) throw LinalgError("sparse LU: not factored");
  Mat X = lu_->solve(B);
  if (lu_->info() != Eigen::Success) throw LinalgError("sparse LU: solve failed");
  return X;
}

void SparseSPD::factor(const SpMatC& A) {
  ldlt_ = std::make_shared<Eigen::SimplicialLDLT<SpMatC>>();
  ldlt_->compute(A);
  if (ldlt_->info() != Eigen::Success) throw LinalgError("LDLT: factorization failed");
}

Vec SparseSPD::solve(const Vec& b) const {
  if (!ldlt_) throw LinalgError("LDLT: not factored");
  return ldlt_->solve(b);
}

Vec sparse_solve(const SpMatC& A, const Vec& b) {
  SparseLU lu(A);
  Vec x = lu.solve(b);
  double r = relative_residual(A, x, b);
  if (!(r <= 1e-11)) {
    // one step of iterative refinement before giving up
    x += lu.solve(Vec(b - A * x));
    r = relative_residual(A, x, b);
    if (!(r <= 1e-11)) throw LinalgError("sparse solve: residual " + std::to_string(r));
  }
  return x;
}

double relative_residual(const SpMatC& A, const Vec& x, const Vec& b) {
  double nb = b.norm();
  double nr = (A * x - b).norm();
  return nb > 0 ? nr / nb : nr;
}

Vec dense_lu_solve(const Mat& A, const Vec& b) {
  Eigen::PartialPivLU<Mat> lu(A);
  return lu.solve(b);
}

Vec qr_solve(const Mat& A, const Vec& b) {
  Eigen::ColPivHouseholderQR<Mat> qr(A);
  if (qr.rank() < A.cols()) throw LinalgError("qr solve: rank deficient");
  return qr.solve(b);
}

namespace {

using DgeevFn = lapack_int (*)(int, char, char, lapack_int, double*, lapack_int, double*, double*, double*,
                               lapack_int, double*, lapack_int);

struct EigenBackend {
  DgeevFn dgeev = nullptr;
  std::string name = "eigen";
};

std::vector<std::complex<double>> eig_eigen(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, false);
  if (es.info() != Eigen::Success) throw LinalgError("eigenvalues: QR failed to converge");
  std::vector<std::complex<double>> ev(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) ev[i] = es.eigenvalues()[i];
  return ev;
}

std::vector<std::complex<double>> eig_lapack(DgeevFn dgeev, const Mat& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Mat a = A;  // column-major copy, overwritten
  std::vector<double> wr(n), wi(n);
  lapack_int info = dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw LinalgError("eigenvalues: QR failed to converge (info " + std::to_string(info) + ")");
  std::vector<std::complex<double>> ev(n);
  for (lapack_int i = 0; i < n; ++i) ev[i] = {wr[i], wi[i]};
  return ev;
}

// Some OpenBLAS builds pick kernels for newer x86 cores that return wrong
// dgeev results; pin a conservative core type unless the user chose one, and
// accept the library only if it agrees with Eigen on a fixed test matrix.
EigenBackend pick_backend() {
  EigenBackend b;
  const char* force = std::getenv("NLC_EIGEN_BACKEND");
  if (force && std::string(force) == "eigen") return b;
#if defined(__x86_64__)
  if (!std::getenv("OPENBLAS_CORETYPE") && __builtin_cpu_supports("avx2")) setenv("OPENBLAS_CORETYPE", "Haswell", 0);
#endif
  void* lib = nullptr;
  for (const char* so : {"liblapacke.so.3", "liblapacke.so"})
    if ((lib = dlopen(so, RTLD_NOW | RTLD_LOCAL))) break;
  if (!lib) return b;
  auto fn = reinterpret_cast<DgeevFn>(dlsym(lib, "LAPACKE_dgeev"));
  if (!fn) return b;
  const int n = 300;
  Mat T(n, n);
  std::mt19937 rng(12345);
  std::normal_distribution<double> N01;
  for (Eigen::Index k = 0; k < T.size(); ++k) T.data()[k] = N01(rng) / std::sqrt(double(n));
  try {
    auto a = eig_lapack(fn, T), e = eig_eigen(T);
    auto key = [](std::complex<double> z) { return std::make_pair(z.real(), z.imag()); };
    auto cmp = [&](std::complex<double> x, std::complex<double> y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), cmp);
    std::sort(e.begin(), e.end(), cmp);
    for (int i = 0; i < n; ++i)
      if (std::abs(a[i] - e[i]) > 1e-8) return b;
  } catch (const LinalgError&) {
    return b;
  }
  b.dgeev = fn;
  b.name = "lapack";
  return b;
}

const EigenBackend& backend() {
  static const EigenBackend b = pick_backend();
  return b;
}

}  // namespace

std::string eigen_backend_name() { return backend().name; }

std::vector<std::complex<double>> eigenvalues_dense(const Mat& A) {
  if (A.rows() != A.cols()) throw LinalgError("eigenvalues: matrix not square");
  if (A.rows() == 0) return {};
  if (!A.allFinite()) throw LinalgError("eigenvalues: non-finite entries");
  const auto& b = backend();
  return b.dgeev ? eig_lapack(b.dgeev, A) : eig_eigen(A);
}

double spectral_radius(const Mat& A) {
  double rho = 0.0;
  for (auto& l : eigenvalues_dense(A)) rho = std::max(rho, std::abs(l));
  return rho;
}

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace nlc
