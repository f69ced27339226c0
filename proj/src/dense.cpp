#include "dgsim/dense.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "dgsim/error.hpp"

namespace dgsim {

namespace {

constexpr cplx I1{0.0, 1.0};

// phase · ⊗_q X^{x_q} Z^{z_q}; qubit q sits at bit n-q of the basis index
struct Pauli {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  cplx phase = 1.0;
};

int parity_of(std::uint64_t v) { return std::popcount(v) & 1; }

Pauli operator*(const Pauli& a, const Pauli& b) {
  // Z^a X^b = (-1)^{|a∧b|} X^b Z^a on every qubit
  const double sign = parity_of(a.z & b.x) ? -1.0 : 1.0;
  return {a.x ^ b.x, a.z ^ b.z, a.phase * b.phase * sign};
}

Pauli majorana_pauli(int n, int j) {
  const int q = (j + 1) / 2;
  const std::uint64_t bit = std::uint64_t{1} << (n - q);
  const std::uint64_t string = ((std::uint64_t{1} << (q - 1)) - 1) << (n - q + 1);
  if (j % 2 == 1) return {bit, string, 1.0};
  // Y = i X Z
  return {bit, string | bit, I1};
}

Pauli monomial_pauli(int n, SubsetMask mask) {
  Pauli p;
  for (int j = 1; j <= 2 * n; ++j)
    if (mask >> (j - 1) & 1) p = p * majorana_pauli(n, j);
  return p;
}

double sign_of(std::uint64_t z, std::uint64_t y) { return parity_of(z & y) ? -1.0 : 1.0; }

// A <- c A + s P A
void left_combine(CMat& a, cplx c, cplx s, const Pauli& p) {
  const auto dim = a.rows();
  CMat pa(dim, a.cols());
  for (Eigen::Index y = 0; y < dim; ++y) {
    pa.row(static_cast<Eigen::Index>(y ^ p.x)) = (p.phase * sign_of(p.z, y)) * a.row(y);
  }
  a = c * a + s * pa;
}

void add_pauli(CMat& a, cplx coeff, const Pauli& p) {
  const auto dim = a.rows();
  for (Eigen::Index y = 0; y < dim; ++y) {
    a(static_cast<Eigen::Index>(y ^ p.x), y) += coeff * p.phase * sign_of(p.z, y);
  }
}

CMat pauli_matrix(int n, const Pauli& p) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat m = CMat::Zero(dim, dim);
  add_pauli(m, 1.0, p);
  return m;
}

// Tr(P† A)
cplx pauli_overlap(const Pauli& p, const CMat& a) {
  cplx acc = 0.0;
  const auto dim = a.rows();
  for (Eigen::Index y = 0; y < dim; ++y) {
    acc += sign_of(p.z, y) * a(static_cast<Eigen::Index>(y ^ p.x), y);
  }
  return std::conj(p.phase) * acc;
}

void check_qubits(int n) {
  if (n < 0) throw DimensionError("negative qubit count");
  require_oracle_size(n, kDenseMaxQubits, "dense operator");
}

void check_majorana_index(int n, int j) {
  if (j < 1 || j > 2 * n) {
    std::ostringstream os;
    os << "Majorana index " << j << " outside [1, " << 2 * n << "]";
    throw IndexError(os.str());
  }
}

}  // namespace

void require_oracle_size(int qubits, int cap, const char* what) {
  if (qubits > cap) {
    std::ostringstream os;
    os << what << ": " << qubits << " exceeds the dense oracle cap of " << cap;
    throw SizeLimitError(os.str());
  }
}

DenseOp::DenseOp(int n, CMat m) : n_(n), m_(std::move(m)) {
  check_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (m_.rows() != dim || m_.cols() != dim) throw DimensionError("dense operator must be 2ⁿ×2ⁿ");
}

DenseOp DenseOp::identity(int n) {
  check_qubits(n);
  return DenseOp(n, CMat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n));
}

DenseOp DenseOp::zero(int n) {
  check_qubits(n);
  return DenseOp(n, CMat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n));
}

DenseOp DenseOp::from_vector(int n, const Eigen::VectorXcd& psi) {
  check_qubits(n);
  if (psi.size() != (Eigen::Index{1} << n)) throw DimensionError("state vector must have length 2ⁿ");
  return DenseOp(n, psi * psi.adjoint());
}

DenseOp DenseOp::operator*(const DenseOp& o) const {
  if (n_ != o.n_) throw DimensionError("operator sizes differ");
  return DenseOp(n_, m_ * o.m_);
}

DenseOp DenseOp::operator+(const DenseOp& o) const {
  if (n_ != o.n_) throw DimensionError("operator sizes differ");
  return DenseOp(n_, m_ + o.m_);
}

SubsetMask subset_mask(std::span<const int> J) {
  SubsetMask mask = 0;
  for (std::size_t a = 0; a < J.size(); ++a) {
    if (J[a] < 1 || J[a] > 64) throw IndexError("subset index out of range");
    if (a > 0 && J[a] <= J[a - 1]) throw IndexError("subset indices must be strictly increasing");
    mask |= SubsetMask{1} << (J[a] - 1);
  }
  return mask;
}

std::vector<int> subset_indices(SubsetMask mask) {
  std::vector<int> J;
  for (int j = 1; mask != 0; ++j, mask >>= 1)
    if (mask & 1) J.push_back(j);
  return J;
}

MomentTable::MomentTable(int n, std::vector<cplx> values) : n_(n), values_(std::move(values)) {
  if (values_.size() != (std::size_t{1} << (2 * n))) throw DimensionError("moment table must have 4ⁿ entries");
}

cplx MomentTable::at(std::span<const int> J) const {
  for (int j : J) check_majorana_index(n_, j);
  return values_[subset_mask(J)];
}

DenseOp majorana(int n, int j) {
  require_oracle_size(n, kDenseMaxQubits, "majorana");
  check_majorana_index(n, j);
  return DenseOp(n, pauli_matrix(n, majorana_pauli(n, j)));
}

DenseOp monomial(int n, std::span<const int> J) {
  require_oracle_size(n, kDenseMaxQubits, "monomial");
  for (int j : J) check_majorana_index(n, j);
  return DenseOp(n, pauli_matrix(n, monomial_pauli(n, subset_mask(J))));
}

MomentTable moments(const DenseOp& a) {
  const int n = a.n();
  const SubsetMask count = SubsetMask{1} << (2 * n);
  std::vector<cplx> values(count);
  std::vector<Pauli> basis(2 * n);
  for (int j = 1; j <= 2 * n; ++j) basis[j - 1] = majorana_pauli(n, j);
  for (SubsetMask mask = 0; mask < count; ++mask) {
    Pauli p;
    for (int j = 0; j < 2 * n; ++j)
      if (mask >> j & 1) p = p * basis[j];
    values[mask] = pauli_overlap(p, a.mat());
  }
  return MomentTable(n, std::move(values));
}

DenseOp from_moments(const MomentTable& t) {
  const int n = t.n();
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat m = CMat::Zero(dim, dim);
  const double norm = 1.0 / static_cast<double>(dim);
  for (SubsetMask mask = 0; mask < t.values().size(); ++mask) {
    const cplx v = t[mask];
    if (v == 0.0) continue;
    add_pauli(m, v * norm, monomial_pauli(n, mask));
  }
  return DenseOp(n, std::move(m));
}

DenseOp exp_quadratic(int n, const AntisymMat& h, const Vec& d) {
  require_oracle_size(n, kOracleMaxQubits, "exp_quadratic");
  if (h.dim() != 2 * n || d.size() != 2 * n) throw DimensionError("exp_quadratic needs 2n×2n h and 2n-vector d");
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat g = CMat::Zero(dim, dim);
  for (int j = 1; j <= 2 * n; ++j) {
    if (d(j - 1) != 0.0) add_pauli(g, I1 * d(j - 1), majorana_pauli(n, j));
    for (int k = j + 1; k <= 2 * n; ++k) {
      if (h(j - 1, k - 1) != 0.0) add_pauli(g, h(j - 1, k - 1), majorana_pauli(n, j) * majorana_pauli(n, k));
    }
  }
  return DenseOp(n, g.exp());
}

DenseOp conv_unitary(int n, double coeff) {
  require_oracle_size(n, kOracleMaxPairQubits, "conv_unitary");
  const int q = 2 * n;
  CMat w = CMat::Identity(Eigen::Index{1} << q, Eigen::Index{1} << q);
  // the 2n pair terms commute and each squares to -I
  for (int j = 1; j <= 2 * n; ++j) {
    left_combine(w, std::cos(coeff), std::sin(coeff), majorana_pauli(q, j) * majorana_pauli(q, 2 * n + j));
  }
  return DenseOp(q, std::move(w));
}

DenseOp fermionic_convolution(const DenseOp& rho, const DenseOp& sigma, double coeff) {
  if (rho.n() != sigma.n()) throw DimensionError("convolution inputs must have equal size");
  const int n = rho.n();
  require_oracle_size(n, kOracleMaxPairQubits, "fermionic_convolution");
  require_state(rho, "convolution input");
  require_state(sigma, "convolution input");
  if (odd_part_norm(rho) > 1e-10 || odd_part_norm(sigma) > 1e-10) {
    throw PreconditionError("fermionic convolution is defined for even states only");
  }
  const DenseOp w = conv_unitary(n, coeff);
  return partial_trace(conjugate(w, tensor(rho, sigma)), n);
}

DenseOp fswap(int n, int a, int b) {
  require_oracle_size(n, kOracleMaxQubits, "fswap");
  if (a == b) throw IndexError("fswap needs two distinct lines");
  if (a < 1 || b > n || a > b) throw IndexError("fswap needs 1 <= a < b <= n");
  const double q = std::numbers::pi / 4;
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat g = CMat::Zero(dim, dim);
  auto pair = [&](int j, int k) { return majorana_pauli(n, j) * majorana_pauli(n, k); };
  add_pauli(g, q, pair(2 * a - 1, 2 * b));
  add_pauli(g, -q, pair(2 * a, 2 * b - 1));
  add_pauli(g, -q, pair(2 * a - 1, 2 * a));
  add_pauli(g, -q, pair(2 * b - 1, 2 * b));
  return DenseOp(n, g.exp());
}

DenseOp embed_V(int n) {
  require_oracle_size(n + 1, kOracleMaxQubits + 1, "embed_V");
  const int q = n + 1;
  CMat v = CMat::Identity(Eigen::Index{1} << q, Eigen::Index{1} << q) / std::sqrt(2.0);
  add_pauli(v, -I1 / std::sqrt(2.0), majorana_pauli(q, 2 * n + 2));
  return DenseOp(q, std::move(v));
}

Mat max_entangled_covariance(int n) {
  Mat m = Mat::Zero(4 * n, 4 * n);
  for (int j = 0; j < 2 * n; ++j) {
    // Pf must match that of |0…0⟩ for the two to lie on one SO(4n) orbit
    const double s = (j == 0 && n % 2 == 1) ? -1.0 : 1.0;
    m(j, 2 * n + j) = s;
    m(2 * n + j, j) = -s;
  }
  return m;
}

DenseOp max_entangled(int n) {
  require_oracle_size(n, kOracleMaxPairQubits, "max_entangled");
  const int q = 2 * n;
  Mat target = Mat::Zero(2 * q + 1, 2 * q + 1);
  target.topLeftCorner(2 * q, 2 * q) = max_entangled_covariance(n);
  const auto qe = state_canonical_form(target).R.mat();
  const auto q0 = state_canonical_form(from_diagonal(DiagonalSpec(std::vector<double>(q, 1.0))).extended()).R.mat();
  const Rotation r(qe.transpose() * q0, 1e-9);
  const DenseOp u = sequence_unitary(compile(r));
  return DenseOp::from_vector(q, u.mat().col(0));
}

double born_probability(const DenseOp& rho, std::span<const int> K, std::span<const int> x) {
  const int n = rho.n();
  if (K.size() != x.size()) throw DimensionError("bitstring length must match the line subset");
  std::uint64_t care = 0, want = 0;
  for (std::size_t a = 0; a < K.size(); ++a) {
    if (K[a] < 1 || K[a] > n) throw IndexError("measured line out of range");
    if (a > 0 && K[a] <= K[a - 1]) throw IndexError("measured lines must be strictly increasing");
    if (x[a] != 0 && x[a] != 1) throw PreconditionError("bits must be 0 or 1");
    const std::uint64_t bit = std::uint64_t{1} << (n - K[a]);
    care |= bit;
    if (x[a]) want |= bit;
  }
  double p = 0.0;
  for (Eigen::Index y = 0; y < rho.size(); ++y)
    if ((static_cast<std::uint64_t>(y) & care) == want) p += rho.mat()(y, y).real();
  return p;
}

DenseOp tensor(const DenseOp& a, const DenseOp& b) {
  return DenseOp(a.n() + b.n(), Eigen::kroneckerProduct(a.mat(), b.mat()).eval());
}

DenseOp partial_trace(const DenseOp& a, int traced) {
  if (traced < 0 || traced > a.n()) throw DimensionError("cannot trace out more qubits than present");
  const int keep = a.n() - traced;
  const Eigen::Index dk = Eigen::Index{1} << keep, dt = Eigen::Index{1} << traced;
  CMat out = CMat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      cplx acc = 0.0;
      for (Eigen::Index k = 0; k < dt; ++k) acc += a.mat()(i * dt + k, j * dt + k);
      out(i, j) = acc;
    }
  return DenseOp(keep, std::move(out));
}

double projective_distance(const DenseOp& u, const DenseOp& v) {
  if (u.n() != v.n()) throw DimensionError("operator sizes differ");
  const cplx ov = (v.mat().adjoint() * u.mat()).trace();
  const cplx phase = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  return (u.mat() - phase * v.mat()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const DenseOp& a, const DenseOp& b) {
  if (a.n() != b.n()) throw DimensionError("operator sizes differ");
  return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

DenseOp parity(int n) {
  check_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat p = CMat::Zero(dim, dim);
  for (Eigen::Index y = 0; y < dim; ++y) p(y, y) = parity_of(static_cast<std::uint64_t>(y)) ? -1.0 : 1.0;
  return DenseOp(n, std::move(p));
}

double odd_part_norm(const DenseOp& a) {
  const auto dim = a.size();
  double worst = 0.0;
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      if (parity_of(static_cast<std::uint64_t>(r ^ c))) worst = std::max(worst, std::abs(a.mat()(r, c)));
  return worst;
}

void require_state(const DenseOp& rho, const char* what) {
  const CMat& m = rho.mat();
  std::ostringstream os;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    os << what << ": not Hermitian";
  } else if (std::abs(m.trace() - 1.0) > 1e-10) {
    os << what << ": trace differs from 1";
  } else {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) os << what << ": not positive semidefinite";
  }
  if (!os.str().empty()) throw PreconditionError(os.str());
}

void require_unitary(const DenseOp& u, const char* what) {
  const auto dim = u.size();
  if ((u.mat().adjoint() * u.mat() - CMat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
    throw PreconditionError(std::string(what) + ": not unitary");
  }
}

double dense_purity(const DenseOp& rho) { return (rho.mat() * rho.mat()).trace().real(); }

Mat extended_covariance(const DenseOp& rho) {
  const int n = rho.n();
  const int dim = 2 * n + 1;
  Mat mt = Mat::Zero(dim, dim);
  for (int j = 1; j <= 2 * n; ++j) {
    const Pauli pj = majorana_pauli(n, j);
    mt(j - 1, dim - 1) = pauli_overlap(pj, rho.mat()).real();
    mt(dim - 1, j - 1) = -mt(j - 1, dim - 1);
    for (int k = j + 1; k <= 2 * n; ++k) {
      // Tr(iγ_jγ_k ρ) = -i Tr((γ_jγ_k)† ρ)
      const double v = (-I1 * pauli_overlap(pj * majorana_pauli(n, k), rho.mat())).real();
      mt(j - 1, k - 1) = v;
      mt(k - 1, j - 1) = -v;
    }
  }
  return mt;
}

double wick_deviation(const DenseOp& rho) {
  const Mat mt = extended_covariance(rho);
  const auto table = moments(rho);
  double worst = 0.0;
  for (SubsetMask mask = 0; mask < table.values().size(); ++mask) {
    worst = std::max(worst, std::abs(table[mask] - wick_moment(mt, subset_indices(mask))));
  }
  return worst;
}

namespace {

// U <- G U for one gate
void apply_gate_dense(CMat& u, const Gate& g, int n) {
  if (const auto* f = std::get_if<FSwap>(&g)) {
    u = fswap(n, f->line, f->line + 1).mat() * u;
    return;
  }
  const PlaneRotation& p = std::holds_alternative<Matchgate>(g) ? std::get<Matchgate>(g).plane
                                                                 : std::get<Line1Gate>(g).plane;
  const int big = 2 * n + 1;
  const double c = std::cos(p.angle / 2), s = std::sin(p.angle / 2);
  if (p.j != big && p.k != big) {
    left_combine(u, c, s, majorana_pauli(n, p.j) * majorana_pauli(n, p.k));
  } else if (p.k == big) {
    left_combine(u, c, -I1 * s, majorana_pauli(n, p.j));
  } else {
    left_combine(u, c, I1 * s, majorana_pauli(n, p.k));
  }
}

}  // namespace

DenseOp gate_unitary(const Gate& g, int n) {
  require_oracle_size(n, kDenseMaxQubits, "gate_unitary");
  check_gate(g, n);
  CMat u = CMat::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  apply_gate_dense(u, g, n);
  return DenseOp(n, std::move(u));
}

DenseOp sequence_unitary(const GateSequence& seq) {
  require_oracle_size(seq.n, kDenseMaxQubits, "sequence_unitary");
  CMat u = CMat::Identity(Eigen::Index{1} << seq.n, Eigen::Index{1} << seq.n);
  for (const auto& g : seq.gates) {
    check_gate(g, seq.n);
    apply_gate_dense(u, g, seq.n);
  }
  return DenseOp(seq.n, std::move(u));
}

DenseOp conjugate(const DenseOp& u, const DenseOp& a) {
  if (u.n() != a.n()) throw DimensionError("operator sizes differ");
  return DenseOp(a.n(), u.mat() * a.mat() * u.mat().adjoint());
}

}  // namespace dgsim
