#include "dgsim/antisym.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "dgsim/error.hpp"

namespace dgsim {

template <class Scalar>
BasicAntisym<Scalar>::BasicAntisym(Matrix m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("antisymmetric matrix must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && asym > tol * scale) {
    std::ostringstream os;
    os << "matrix is not antisymmetric (|M + Mᵀ| = " << asym << ")";
    throw DimensionError(os.str());
  }
  m_ = (m - m.transpose()) / Scalar(2);
}

template <class Scalar>
BasicAntisym<Scalar> BasicAntisym<Scalar>::zero(Eigen::Index dim) {
  return BasicAntisym(Matrix::Zero(dim, dim));
}

template class BasicAntisym<double>;
template class BasicAntisym<cplx>;

Rotation::Rotation(Mat r, double tol) {
  if (r.rows() != r.cols()) throw DimensionError("rotation must be square");
  const auto m = r.rows();
  if (m > 0) {
    const double orth = (r.transpose() * r - Mat::Identity(m, m)).cwiseAbs().maxCoeff();
    if (orth > tol) throw DimensionError("rotation is not orthogonal");
    const double det = r.partialPivLu().determinant();
    if (std::abs(det - 1.0) > tol) throw DimensionError("rotation has det -1");
  }
  r_ = std::move(r);
}

Rotation Rotation::identity(Eigen::Index dim) { return trusted(Mat::Identity(dim, dim)); }

Rotation Rotation::trusted(Mat r) {
  Rotation out;
  out.r_ = std::move(r);
  return out;
}

Rotation Rotation::operator*(const Rotation& o) const {
  if (dim() != o.dim()) throw DimensionError("rotation dimensions differ");
  return trusted(r_ * o.r_);
}

Rotation Rotation::transpose() const { return trusted(r_.transpose()); }

double normalize_angle(double a) {
  constexpr double pi = std::numbers::pi;
  a = std::remainder(a, 2 * pi);
  if (a <= -pi) a += 2 * pi;
  return a;
}

PlaneRotation::PlaneRotation(int j_, int k_, double a) : j(j_), k(k_), angle(normalize_angle(a)) {
  if (j == k) throw IndexError("plane rotation needs two distinct axes");
  if (j < 1 || k < 1) throw IndexError("plane rotation axes are 1-based");
}

Mat PlaneRotation::matrix(Eigen::Index dim) const {
  if (j > dim || k > dim) throw IndexError("plane rotation axis out of range");
  Mat r = Mat::Identity(dim, dim);
  const double c = std::cos(angle), s = std::sin(angle);
  r(j - 1, j - 1) = c;
  r(k - 1, k - 1) = c;
  r(j - 1, k - 1) = s;
  r(k - 1, j - 1) = -s;
  return r;
}

void PlaneRotation::apply_left(Mat& x) const {
  const double c = std::cos(angle), s = std::sin(angle);
  for (Eigen::Index col = 0; col < x.cols(); ++col) {
    const double a = x(j - 1, col), b = x(k - 1, col);
    x(j - 1, col) = c * a + s * b;
    x(k - 1, col) = -s * a + c * b;
  }
}

void PlaneRotation::apply_right_transpose(Mat& x) const {
  const double c = std::cos(angle), s = std::sin(angle);
  auto cj = x.col(j - 1);
  auto ck = x.col(k - 1);
  for (Eigen::Index row = 0; row < x.rows(); ++row) {
    const double a = cj(row), b = ck(row);
    cj(row) = c * a + s * b;
    ck(row) = -s * a + c * b;
  }
}

template <class Scalar>
Scalar pfaffian_unchecked(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
  using std::abs;
  const Eigen::Index n = a.rows();
  if (n % 2 == 1) throw DimensionError("Pfaffian of an odd-dimensional matrix");
  Scalar pf(1);
  // Parlett-Reid: reduce to tridiagonal form with partial pivoting, two columns per step
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp;
    a.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&kp);
    kp += k + 1;
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    const Scalar piv = a(k, k + 1);
    if (piv == Scalar(0)) return Scalar(0);
    pf *= piv;
    const Eigen::Index rest = n - k - 2;
    if (rest > 0) {
      const auto tau = (a.row(k).tail(rest) / piv).transpose().eval();
      const auto col = a.col(k + 1).tail(rest).eval();
      a.bottomRightCorner(rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

template <class Scalar>
Scalar pfaffian(const BasicAntisym<Scalar>& m) {
  return pfaffian_unchecked<Scalar>(m.mat());
}

template <class Scalar>
Scalar pfaffian_restricted(const BasicAntisym<Scalar>& m, std::span<const int> J) {
  const auto k = static_cast<Eigen::Index>(J.size());
  for (Eigen::Index a = 0; a < k; ++a) {
    if (J[a] < 1 || J[a] > m.dim()) throw IndexError("restriction index out of range");
    if (a > 0 && J[a] <= J[a - 1]) throw IndexError("restriction indices must be strictly increasing");
  }
  if (k % 2 == 1) throw DimensionError("restriction to an odd number of indices");
  typename BasicAntisym<Scalar>::Matrix sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = m(J[a] - 1, J[b] - 1);
  return pfaffian_unchecked<Scalar>(std::move(sub));
}

template double pfaffian_unchecked<double>(Mat);
template cplx pfaffian_unchecked<cplx>(CMat);
template double pfaffian<double>(const AntisymMat&);
template cplx pfaffian<cplx>(const CAntisymMat&);
template double pfaffian_restricted<double>(const AntisymMat&, std::span<const int>);
template cplx pfaffian_restricted<cplx>(const CAntisymMat&, std::span<const int>);

CanonicalForm block_diagonalize(const AntisymMat& m) {
  const Eigen::Index dim = m.dim();
  if (dim == 0) return {Rotation::identity(0), {}};
  Eigen::RealSchur<Mat> schur(m.mat());
  const Mat& t = schur.matrixT();
  const Mat& u = schur.matrixU();

  struct Plane {
    double lambda;
    Eigen::Index a, b;
  };
  std::vector<Plane> planes;
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < dim;) {
    if (i + 1 < dim && t(i + 1, i) != 0.0) {
      const double lam = 0.5 * (t(i, i + 1) - t(i + 1, i));
      if (lam >= 0) planes.push_back({lam, i, i + 1});
      else planes.push_back({-lam, i + 1, i});
      i += 2;
    } else {
      kernel.push_back(i);
      i += 1;
    }
  }
  for (std::size_t q = 0; q + 1 < kernel.size(); q += 2) planes.push_back({0.0, kernel[q], kernel[q + 1]});
  std::stable_sort(planes.begin(), planes.end(),
                   [](const Plane& x, const Plane& y) { return x.lambda > y.lambda; });

  // M = U T Uᵀ, so rows of R are columns of U
  Mat r(dim, dim);
  std::vector<double> lambdas;
  Eigen::Index row = 0;
  for (const auto& p : planes) {
    r.row(row++) = u.col(p.a).transpose();
    r.row(row++) = u.col(p.b).transpose();
    lambdas.push_back(p.lambda);
  }
  if (kernel.size() % 2 == 1) r.row(row++) = u.col(kernel.back()).transpose();

  if (r.partialPivLu().determinant() < 0) {
    if (dim % 2 == 1) {
      r.row(dim - 1) *= -1.0;
    } else {
      r.row(dim - 1) *= -1.0;
      lambdas.back() = -lambdas.back();
    }
  }
  return {Rotation::trusted(std::move(r)), std::move(lambdas)};
}

Rotation expm_antisym(const AntisymMat& h) {
  Mat r = h.mat().exp();
  return Rotation(std::move(r));
}

AntisymMat logm_rotation(const Rotation& rot) {
  const Eigen::Index dim = rot.dim();
  Eigen::RealSchur<Mat> schur(rot.mat());
  const Mat& t = schur.matrixT();
  const Mat& u = schur.matrixU();
  Mat l = Mat::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim;) {
    if (i + 1 < dim && t(i + 1, i) != 0.0) {
      const double s = 0.5 * (t(i + 1, i) - t(i, i + 1));
      const double c = 0.5 * (t(i, i) + t(i + 1, i + 1));
      if (c < -1.0 + 1e-12 && std::abs(s) < 1e-6) throw BranchError("rotation has eigenvalue -1; logarithm is not unique");
      const double phi = std::atan2(s, c);
      l(i, i + 1) = -phi;
      l(i + 1, i) = phi;
      i += 2;
    } else {
      if (t(i, i) < 0) throw BranchError("rotation has eigenvalue -1; logarithm is not unique");
      i += 1;
    }
  }
  return AntisymMat(u * l * u.transpose(), 1e-9);
}

std::vector<PlaneRotation> plane_decompose(const Rotation& rot, const Adjacency& allowed) {
  const int m = static_cast<int>(rot.dim());
  std::vector<std::vector<int>> nbr(m + 1);
  for (int a = 1; a <= m; ++a)
    for (int b = a + 1; b <= m; ++b)
      if (allowed(a, b)) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
      }

  std::vector<int> order;
  if (m > 0) {
    std::vector<char> seen(m + 1, 0);
    std::deque<int> queue{1};
    seen[1] = 1;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (int w : nbr[v])
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    }
  }
  if (static_cast<int>(order.size()) != m) throw DecompositionError("adjacency graph is not connected");

  constexpr double eps = 1e-14;
  Mat a = rot.mat();
  std::vector<char> alive(m + 1, 1);
  std::vector<PlaneRotation> elim;
  std::vector<int> dist(m + 1), hop(m + 1);

  for (auto it = order.rbegin(); it + 1 < order.rend(); ++it) {
    const int u = *it;
    std::fill(dist.begin(), dist.end(), -1);
    std::vector<int> layer_order{u};
    dist[u] = 0;
    for (std::size_t q = 0; q < layer_order.size(); ++q) {
      const int v = layer_order[q];
      for (int w : nbr[v])
        if (alive[w] && dist[w] < 0) {
          dist[w] = dist[v] + 1;
          layer_order.push_back(w);
        }
    }
    for (int v : layer_order) {
      hop[v] = 0;
      for (int w : nbr[v])
        if (alive[w] && dist[w] == dist[v] - 1 && (hop[v] == 0 || w < hop[v])) hop[v] = w;
    }
    for (auto v_it = layer_order.rbegin(); v_it + 1 < layer_order.rend(); ++v_it) {
      const int v = *v_it, w = hop[v];
      const double x = a(v - 1, u - 1);
      if (std::abs(x) <= eps) continue;
      PlaneRotation p(v, w, std::atan2(-x, a(w - 1, u - 1)));
      p.apply_left(a);
      elim.push_back(p);
    }
    if (a(u - 1, u - 1) < 0) {
      int w = 0;
      for (int c : nbr[u])
        if (alive[c] && c != u && (w == 0 || c < w)) w = c;
      PlaneRotation p(u, w, std::numbers::pi);
      p.apply_left(a);
      elim.push_back(p);
    }
    alive[u] = 0;
  }

  std::vector<PlaneRotation> out;
  out.reserve(elim.size());
  for (auto it = elim.rbegin(); it != elim.rend(); ++it) out.emplace_back(it->j, it->k, -it->angle);
  return out;
}

Mat multiply_planes(const std::vector<PlaneRotation>& planes, Eigen::Index dim) {
  Mat r = Mat::Identity(dim, dim);
  for (const auto& p : planes) p.apply_left(r);
  return r;
}

}  // namespace dgsim
