#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nlc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SpMatC = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Triplet = Eigen::Triplet<double>;

struct LinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse LU with COLAMD ordering; factor once, solve many times.
class SparseLU {
 public:
  SparseLU() = default;
  explicit SparseLU(const SpMatC& A) { factor(A); }
  void factor(const SpMatC& A);
  Vec solve(const Vec& b) const;
  Mat solve(const Mat& B) const;
  int rows() const { return n_; }

 private:
  std::shared_ptr<Eigen::SparseLU<SpMatC, Eigen::COLAMDOrdering<int>>> lu_;
  int n_ = 0;
};

// Symmetric positive definite systems (FEM interior block).
class SparseSPD {
 public:
  SparseSPD() = default;
  explicit SparseSPD(const SpMatC& A) { factor(A); }
  void factor(const SpMatC& A);
  Vec solve(const Vec& b) const;

 private:
  std::shared_ptr<Eigen::SimplicialLDLT<SpMatC>> ldlt_;
};

Vec sparse_solve(const SpMatC& A, const Vec& b);

double relative_residual(const SpMatC& A, const Vec& x, const Vec& b);

Vec dense_lu_solve(const Mat& A, const Vec& b);

// Least squares min ||Ax - b|| via column-pivoted QR.
Vec qr_solve(const Mat& A, const Vec& b);

// Dense eigenvalues via LAPACK dgeev when a validated LAPACKE is loadable,
// otherwise Eigen's real Schur solver.
std::vector<std::complex<double>> eigenvalues_dense(const Mat& A);
std::string eigen_backend_name();  // "lapack" or "eigen"

double spectral_radius(const Mat& A);

// Row-major sparse matrix from triplets with duplicates summed.
SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t);

}  // namespace nlc
