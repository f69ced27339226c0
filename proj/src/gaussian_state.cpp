#include "dgsim/gaussian_state.hpp"

#include <algorithm>
#include <cmath>

#include "dgsim/dense.hpp"
#include "dgsim/error.hpp"

namespace dgsim {

namespace {

constexpr double kAdmissibleSlack = 1e-9;
constexpr double kPureTol = 1e-7;
constexpr double kSaturation = 1e-9;

int extended_modes(const Mat& mt) {
  if (mt.rows() != mt.cols() || mt.rows() % 2 == 0) {
    throw DimensionError("extended covariance must be (2n+1)×(2n+1)");
  }
  return static_cast<int>(mt.rows() / 2);
}

}  // namespace

DiagonalSpec::DiagonalSpec(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  for (double l : lambdas_) {
    if (!(std::abs(l) <= 1.0)) throw PreconditionError("diagonal entries must lie in [-1, 1]");
  }
}

DGaussState::DGaussState(const AntisymMat& m, const Vec& mu) {
  if (m.dim() % 2 != 0) throw DimensionError("covariance must be 2n×2n");
  if (mu.size() != m.dim()) throw DimensionError("mean must have length 2n");
  const auto dim = m.dim();
  Mat mt = Mat::Zero(dim + 1, dim + 1);
  mt.topLeftCorner(dim, dim) = m.mat();
  mt.col(dim).head(dim) = mu;
  mt.row(dim).head(dim) = -mu.transpose();
  *this = from_extended(AntisymMat(std::move(mt)));
}

DGaussState DGaussState::from_extended(const AntisymMat& mt) {
  const auto v = validate(mt);
  if (!v.valid) throw PreconditionError("extended covariance is not admissible (canonical value above 1)");
  return trusted(mt.mat());
}

DGaussState DGaussState::trusted(Mat mt) {
  DGaussState s;
  s.n_ = extended_modes(mt);
  s.mt_ = std::move(mt);
  return s;
}

bool DGaussState::is_even(double tol) const {
  return n_ == 0 || mt_.col(2 * n_).head(2 * n_).cwiseAbs().maxCoeff() <= tol;
}

DGaussState from_diagonal(const DiagonalSpec& spec) {
  const int n = spec.n();
  Mat mt = Mat::Zero(2 * n + 1, 2 * n + 1);
  for (int j = 0; j < n; ++j) {
    mt(2 * j, 2 * j + 1) = -spec.lambdas()[j];
    mt(2 * j + 1, 2 * j) = spec.lambdas()[j];
  }
  return DGaussState::trusted(std::move(mt));
}

cplx wick_moment(const Mat& mt, std::span<const int> J) {
  const int n = extended_modes(mt);
  const auto k = static_cast<Eigen::Index>(J.size());
  for (Eigen::Index a = 0; a < k; ++a) {
    if (J[a] < 1 || J[a] > 2 * n) throw IndexError("moment index out of range");
    if (a > 0 && J[a] <= J[a - 1]) throw IndexError("moment indices must be strictly increasing");
  }
  const bool odd = k % 2 == 1;
  const Eigen::Index kt = odd ? k + 1 : k;
  if (kt == 0) return 1.0;
  Mat sub(kt, kt);
  auto idx = [&](Eigen::Index a) { return a < k ? J[a] - 1 : 2 * n; };
  for (Eigen::Index a = 0; a < kt; ++a)
    for (Eigen::Index b = 0; b < kt; ++b) sub(a, b) = mt(idx(a), idx(b));
  const double pf = pfaffian_unchecked<double>(std::move(sub));
  // i^{|J̃|/2} from Pf(iA) on |J̃| indices, times (-i) for odd |J|
  static const cplx phases[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  int p = static_cast<int>((kt / 2) % 4);
  if (odd) p = (p + 3) % 4;
  return phases[p] * pf;
}

cplx wick_moment(const DGaussState& s, std::span<const int> J) { return wick_moment(s.extended(), J); }

Validation validate(const AntisymMat& mt) {
  extended_modes(mt.mat());
  const auto cf = block_diagonalize(mt);
  Validation v;
  v.lambdas = cf.lambdas;
  for (double& l : v.lambdas) l = std::abs(l);
  const double top = v.lambdas.empty() ? 0.0 : *std::max_element(v.lambdas.begin(), v.lambdas.end());
  v.valid = top <= 1.0 + kAdmissibleSlack;
  v.pure = std::all_of(v.lambdas.begin(), v.lambdas.end(),
                       [](double l) { return std::abs(l - 1.0) <= kPureTol; });
  v.rank = 2 * static_cast<int>(std::count_if(v.lambdas.begin(), v.lambdas.end(),
                                              [](double l) { return l > 1e-9; }));
  return v;
}

Validation validate(const CMat& sigma_tilde) {
  const double scale = std::max(1.0, sigma_tilde.cwiseAbs().maxCoeff());
  if (sigma_tilde.size() > 0 && sigma_tilde.real().cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DimensionError("extended covariance must be purely imaginary");
  }
  return validate(AntisymMat(sigma_tilde.imag()));
}

CanonicalForm state_canonical_form(const Mat& mt) {
  const int n = extended_modes(mt);
  auto cf = block_diagonalize(AntisymMat(mt, 1e-9));
  Mat r = cf.R.mat();
  for (int j = 0; j < n; ++j) r.row(2 * j + 1) *= -1.0;
  if (n % 2 == 1) r.row(2 * n) *= -1.0;
  return {Rotation::trusted(std::move(r)), std::move(cf.lambdas)};
}

DGaussState from_thermal(const AntisymMat& h, const Vec& d) {
  const auto dim = h.dim();
  if (dim % 2 != 0 || d.size() != dim) throw DimensionError("thermal generator needs 2n×2n h and 2n-vector d");
  Mat g = Mat::Zero(dim + 1, dim + 1);
  g.topLeftCorner(dim, dim) = h.mat();
  g.col(dim).head(dim) = d;
  g.row(dim).head(dim) = -d.transpose();
  const auto cf = block_diagonalize(AntisymMat(std::move(g)));
  Mat block = Mat::Zero(dim + 1, dim + 1);
  for (std::size_t j = 0; j < cf.lambdas.size(); ++j) {
    const double t = std::tanh(cf.lambdas[j]);
    block(2 * j, 2 * j + 1) = -t;
    block(2 * j + 1, 2 * j) = t;
  }
  const Mat& q = cf.R.mat();
  Mat mt = q.transpose() * block * q;
  return DGaussState::trusted(0.5 * (mt - mt.transpose()));
}

std::variant<ThermalGenerator, Saturation> to_thermal(const DGaussState& s) {
  const auto cf = block_diagonalize(AntisymMat(s.extended(), 1e-9));
  Saturation sat;
  for (std::size_t j = 0; j < cf.lambdas.size(); ++j) {
    if (cf.lambdas[j] >= 1.0 - kSaturation) sat.modes.push_back(static_cast<int>(j) + 1);
  }
  if (!sat.modes.empty()) return sat;
  const auto dim = s.extended().rows();
  Mat block = Mat::Zero(dim, dim);
  for (std::size_t j = 0; j < cf.lambdas.size(); ++j) {
    const double b = std::atanh(cf.lambdas[j]);
    block(2 * j, 2 * j + 1) = -b;
    block(2 * j + 1, 2 * j) = b;
  }
  const Mat& q = cf.R.mat();
  const Mat g = q.transpose() * block * q;
  const auto m = dim - 1;
  return ThermalGenerator{AntisymMat(g.topLeftCorner(m, m), 1e-9), g.col(m).head(m)};
}

double purity(const DGaussState& s) {
  const auto cf = block_diagonalize(AntisymMat(s.extended(), 1e-9));
  double p = 1.0;
  for (double l : cf.lambdas) p *= 0.5 * (1.0 + l * l);
  return p;
}

DenseOp dense(const DGaussState& s) {
  const int n = s.n();
  require_oracle_size(n, kOracleMaxQubits, "dense state");
  const SubsetMask count = SubsetMask{1} << (2 * n);
  std::vector<cplx> values(count);
  for (SubsetMask mask = 0; mask < count; ++mask) {
    values[mask] = wick_moment(s.extended(), subset_indices(mask));
  }
  return from_moments(MomentTable(n, std::move(values)));
}

}  // namespace dgsim
