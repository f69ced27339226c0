#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dgsim/dense.hpp"
#include "dgsim/gaussian_state.hpp"
#include "dgsim/gaussian_unitary.hpp"

namespace dgsim::testing {

// hand-rolled generators over a fixed-seed engine
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(rng_); }

  Mat matrix(Eigen::Index rows, Eigen::Index cols) {
    Mat m(rows, cols);
    for (Eigen::Index a = 0; a < m.size(); ++a) m.data()[a] = normal();
    return m;
  }
  Vec vector(Eigen::Index size) { return matrix(size, 1); }

  AntisymMat antisym(Eigen::Index dim, double scale = 1.0) {
    const Mat a = matrix(dim, dim);
    return AntisymMat(scale * (a - a.transpose()));
  }

  // Haar-ish element of SO(dim) from the QR of a Gaussian matrix
  Rotation rotation(Eigen::Index dim) {
    Eigen::HouseholderQR<Mat> qr(matrix(dim, dim));
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR();
    for (Eigen::Index a = 0; a < dim; ++a)
      if (r(a, a) < 0) q.col(a) *= -1.0;
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return Rotation(q);
  }

  std::vector<double> lambdas(int n, bool pure = false) {
    std::vector<double> l(n);
    for (auto& x : l) x = pure ? (uniform() < 0 ? -1.0 : 1.0) : uniform();
    return l;
  }

  DGUnitary unitary(int n, double scale = 1.0) { return DGUnitary(antisym(2 * n, scale), scale * vector(2 * n)); }
  DGUnitary even_unitary(int n, double scale = 1.0) { return DGUnitary(antisym(2 * n, scale), Vec::Zero(2 * n)); }

  // rotated diagonal state; mixed unless pure is set
  DGaussState state(int n, bool pure = false) {
    const DGaussState d = from_diagonal(DiagonalSpec(lambdas(n, pure)));
    return conjugate_state(DGUnitary::from_rotation(rotation(2 * n + 1)), d);
  }
  DGaussState even_state(int n, bool pure = false) {
    const DGaussState d = from_diagonal(DiagonalSpec(lambdas(n, pure)));
    Mat r = Mat::Identity(2 * n + 1, 2 * n + 1);
    r.topLeftCorner(2 * n, 2 * n) = rotation(2 * n).mat();
    return conjugate_state(DGUnitary::from_rotation(Rotation(r)), d);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

// Pfaffian straight from the signed sum over perfect matchings; m <= 8
template <class Scalar>
Scalar combinatorial_pfaffian(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
  const auto m = a.rows();
  if (m % 2) return Scalar(0);
  if (m == 0) return Scalar(1);
  Scalar total(0);
  for (Eigen::Index k = 1; k < m; ++k) {
    std::vector<Eigen::Index> rest;
    for (Eigen::Index r = 1; r < m; ++r)
      if (r != k) rest.push_back(r);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(m - 2, m - 2);
    for (Eigen::Index r = 0; r < m - 2; ++r)
      for (Eigen::Index c = 0; c < m - 2; ++c) sub(r, c) = a(rest[r], rest[c]);
    const double sign = (k - 1) % 2 ? -1.0 : 1.0;
    total += sign * a(0, k) * combinatorial_pfaffian<Scalar>(sub);
  }
  return total;
}

// truncated Taylor series with scaling and squaring
inline Mat series_expm(const Mat& a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  const Mat s = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * s / k;
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

// e^{-H}/Tr e^{-H} with H = (i/2) Σ h_jk γ_jγ_k + Σ d_j γ_j, built densely
inline DenseOp dense_thermal(int n, const AntisymMat& h, const Vec& d) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat hm = CMat::Zero(dim, dim);
  for (int j = 1; j <= 2 * n; ++j) {
    hm += d(j - 1) * majorana(n, j).mat();
    for (int k = 1; k <= 2 * n; ++k) {
      if (j == k) continue;
      hm += cplx(0, 0.5) * h(j - 1, k - 1) * (majorana(n, j) * majorana(n, k)).mat();
    }
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(hm);
  const Eigen::VectorXd w = (-es.eigenvalues().array()).exp();
  CMat rho = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return DenseOp(n, rho / rho.trace());
}

inline DenseOp bloch_qubit(double x, double y, double z) {
  CMat m(2, 2);
  m << 1 + z, cplx(x, -y), cplx(x, y), 1 - z;
  return DenseOp(1, 0.5 * m);
}

inline double max_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline DenseOp dense_diagonal(const std::vector<double>& l) {
  DenseOp rho = bloch_qubit(0, 0, l[0]);
  for (std::size_t q = 1; q < l.size(); ++q) rho = tensor(rho, bloch_qubit(0, 0, l[q]));
  return rho;
}

// the same random state twice: once on the covariance side, once densely
struct Pair {
  DGaussState state;
  DenseOp rho;
};

inline Pair random_pair(Gen& g, int n, bool pure = false, double scale = 0.6) {
  const auto l = g.lambdas(n, pure);
  const AntisymMat h = g.antisym(2 * n, scale);
  const Vec d = scale * g.vector(2 * n);
  const DGaussState s = conjugate_state(DGUnitary(h, d), from_diagonal(DiagonalSpec(l)));
  return {s, conjugate(exp_quadratic(n, h, d), dense_diagonal(l))};
}

}  // namespace dgsim::testing
