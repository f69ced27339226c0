#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dgsim {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using cplx = std::complex<double>;

// Antisymmetric square matrix. Checked to 1e-12 (relative to the largest entry)
// on construction and then stored exactly antisymmetric.
template <class Scalar>
class BasicAntisym {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicAntisym() = default;
  explicit BasicAntisym(Matrix m, double tol = 1e-12);
  static BasicAntisym zero(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  Scalar operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

 private:
  Matrix m_;
};

using AntisymMat = BasicAntisym<double>;
using CAntisymMat = BasicAntisym<cplx>;

// Special orthogonal matrix. RᵀR = I and det R = +1 to 1e-10.
class Rotation {
 public:
  explicit Rotation(Mat r, double tol = 1e-10);
  static Rotation identity(Eigen::Index dim);
  // skips the O(m³) check; for products of already validated rotations
  static Rotation trusted(Mat r);

  Eigen::Index dim() const { return r_.rows(); }
  const Mat& mat() const { return r_; }
  Rotation operator*(const Rotation& o) const;
  Rotation transpose() const;

 private:
  Rotation() = default;
  Mat r_;
};

// exp(θ(E_jk - E_kj)) on 1-based axes: R_jj = R_kk = cos θ, R_jk = sin θ, R_kj = -sin θ.
struct PlaneRotation {
  int j = 1;
  int k = 2;
  double angle = 0.0;

  PlaneRotation() = default;
  PlaneRotation(int j, int k, double angle);

  Mat matrix(Eigen::Index dim) const;
  // X <- P X, touching rows j and k only
  void apply_left(Mat& x) const;
  // X <- X Pᵀ, touching columns j and k only
  void apply_right_transpose(Mat& x) const;
};

double normalize_angle(double a);

template <class Scalar>
Scalar pfaffian(const BasicAntisym<Scalar>& m);

// raw kernel; the input must already be antisymmetric
template <class Scalar>
Scalar pfaffian_unchecked(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a);

// Pf of the restriction to the 1-based, strictly increasing index tuple J
template <class Scalar>
Scalar pfaffian_restricted(const BasicAntisym<Scalar>& m, std::span<const int> J);

struct CanonicalForm {
  Rotation R;
  // R M Rᵀ = ⊕ [[0, λ_j], [-λ_j, 0]] (⊕ 0 for odd dim). Sorted descending; for even
  // dim only the last entry may be negative and then carries the sign of Pf(M).
  std::vector<double> lambdas;
};

CanonicalForm block_diagonalize(const AntisymMat& m);

Rotation expm_antisym(const AntisymMat& h);

// principal logarithm; BranchError when -1 is an eigenvalue
AntisymMat logm_rotation(const Rotation& r);

using Adjacency = std::function<bool(int, int)>;

// Factor R into allowed plane rotations, R = P_K ... P_1 where the list is {P_1, ..., P_K}.
// Leaf elimination over a spanning tree of the adjacency graph; every non-leaf entry is
// pushed toward the leaf along shortest allowed paths. At most m(m+1)/2 rotations.
std::vector<PlaneRotation> plane_decompose(const Rotation& r, const Adjacency& allowed);

Mat multiply_planes(const std::vector<PlaneRotation>& planes, Eigen::Index dim);

}  // namespace dgsim
