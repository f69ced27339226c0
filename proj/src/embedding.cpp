#include "dgsim/embedding.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "dgsim/error.hpp"

namespace dgsim {

namespace {

constexpr double kPureSlack = 1e-9;

Mat assemble(const Mat& mt, const Vec& r, double c) {
  const auto m = mt.rows() - 1;
  Mat e = Mat::Zero(m + 2, m + 2);
  e.topLeftCorner(m, m) = mt.topLeftCorner(m, m);
  e.col(m).head(m) = -r;
  e.row(m).head(m) = r.transpose();
  e.col(m + 1).head(m) = mt.col(m).head(m);
  e.row(m + 1).head(m) = -mt.col(m).head(m).transpose();
  e(m, m + 1) = c;
  e(m + 1, m) = -c;
  return e;
}

DGaussState even_state(const Mat& sigma) {
  const auto m = sigma.rows();
  Mat mt = Mat::Zero(m + 1, m + 1);
  mt.topLeftCorner(m, m) = sigma;
  return DGaussState::trusted(std::move(mt));
}

void require_pure(const DenseOp& rho, const char* what) {
  if (dense_purity(rho) < 1.0 - kPureSlack) throw PreconditionError(std::string(what) + ": input must be pure");
}

CMat single_qubit(QubitGate::Kind kind) {
  const double h = 1.0 / std::sqrt(2.0);
  CMat hadamard(2, 2);
  hadamard << h, h, h, -h;
  CMat sdg = CMat::Zero(2, 2);
  sdg(0, 0) = 1.0;
  sdg(1, 1) = cplx(0, -1);
  const CMat a = sdg * hadamard;
  switch (kind) {
    case QubitGate::Kind::A: return a;
    case QubitGate::Kind::Adg: return a.adjoint();
    case QubitGate::Kind::Sdg: return sdg;
    default: throw PreconditionError("not a single-qubit gate");
  }
}

}  // namespace

EmbeddingResult embedding(const DGaussState& s) {
  const auto cf = state_canonical_form(s.extended());
  const auto m = 2 * s.n();
  const Vec r = cf.R.mat().row(m).head(m).transpose();
  const double c = cf.R.mat()(m, m);
  return {AntisymMat(assemble(s.extended(), r, c), 1e-9), r, c};
}

DGaussState embed_state(const DGaussState& s) { return even_state(embedding(s).sigma.mat()); }

Mat embedded_covariance(const DGaussState& s) {
  const int n = s.n();
  const auto m = 2 * n;
  const AntisymMat mt(s.extended(), 1e-9);
  std::vector<int> all(m);
  for (int j = 0; j < m; ++j) all[j] = j + 1;
  const double sign = n % 2 ? -1.0 : 1.0;
  const double c = sign * pfaffian_restricted(mt, all);
  Vec r(m);
  for (int j = 1; j <= m; ++j) {
    std::vector<int> rest;
    for (int k = 1; k <= m + 1; ++k)
      if (k != j) rest.push_back(k);
    r(j - 1) = (j % 2 ? sign : -sign) * pfaffian_restricted(mt, rest);
  }
  return assemble(s.extended(), r, c);
}

AntisymMat embed_unitary(const DGUnitary& u) {
  const auto g = u.generator();
  const auto m = g.h.dim();
  Mat h = Mat::Zero(m + 2, m + 2);
  h.topLeftCorner(m, m) = g.h.mat();
  h.col(m + 1).head(m) = -g.d;
  h.row(m + 1).head(m) = g.d.transpose();
  return AntisymMat(std::move(h));
}

std::vector<QubitGate> embed_V_gates(int n) {
  if (n < 1) throw DimensionError("embedding needs at least one qubit");
  const int anc = n + 1;
  std::vector<QubitGate> out;
  out.push_back({QubitGate::Kind::Adg, anc});
  for (int j = 1; j <= n; ++j) out.push_back({QubitGate::Kind::CX, anc, j});
  out.push_back({QubitGate::Kind::Sdg, anc});
  for (int j = n; j >= 1; --j) out.push_back({QubitGate::Kind::CX, anc, j});
  out.push_back({QubitGate::Kind::A, anc});
  return out;
}

DenseOp qubit_circuit_unitary(int qubits, const std::vector<QubitGate>& gates) {
  require_oracle_size(qubits, kDenseMaxQubits, "qubit circuit");
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  CMat u = CMat::Identity(dim, dim);
  for (const auto& g : gates) {
    if (g.target < 1 || g.target > qubits) throw IndexError("gate target out of range");
    const Eigen::Index tbit = Eigen::Index{1} << (qubits - g.target);
    if (g.kind == QubitGate::Kind::CX) {
      if (g.control < 1 || g.control > qubits || g.control == g.target) throw IndexError("bad CX control");
      const Eigen::Index cbit = Eigen::Index{1} << (qubits - g.control);
      CMat next(dim, dim);
      for (Eigen::Index y = 0; y < dim; ++y) next.row((y & cbit) ? (y ^ tbit) : y) = u.row(y);
      u = std::move(next);
    } else {
      const CMat s = single_qubit(g.kind);
      CMat next = CMat::Zero(dim, dim);
      for (Eigen::Index y = 0; y < dim; ++y) {
        const int b = (y & tbit) ? 1 : 0;
        const Eigen::Index y0 = y & ~tbit, y1 = y | tbit;
        next.row(y0) += s(0, b) * u.row(y);
        next.row(y1) += s(1, b) * u.row(y);
      }
      u = std::move(next);
    }
  }
  return DenseOp(qubits, std::move(u));
}

DenseOp embed_dense(const DenseOp& rho) {
  const int n = rho.n();
  Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  const DenseOp anc = DenseOp::from_vector(1, plus);
  return conjugate(embed_V(n), tensor(rho, anc));
}

DenseOp choi_state(const DenseOp& u) {
  const int n = u.n();
  require_oracle_size(n, kOracleMaxPairQubits, "choi_state");
  const DenseOp lifted = tensor(u, DenseOp::identity(n));
  return conjugate(lifted, max_entangled(n));
}

StateTest gaussian_state_test(const DenseOp& psi, double coeff) {
  require_oracle_size(psi.n(), kOracleMaxPairQubits, "gaussian_state_test");
  require_state(psi, "gaussian_state_test");
  require_pure(psi, "gaussian_state_test");
  if (odd_part_norm(psi) > 1e-10) throw PreconditionError("gaussian_state_test: input must be even");
  const DenseOp conv = fermionic_convolution(psi, psi, coeff);
  const double ov = (psi.mat() * conv.mat()).trace().real();
  return {ov, ov >= 1.0 - kVerdictTol};
}

UnitaryTest gaussian_unitary_test(const DenseOp& u) {
  require_oracle_size(u.n(), kOracleMaxPairQubits, "gaussian_unitary_test");
  require_unitary(u, "gaussian_unitary_test");
  if (odd_part_norm(u) > 1e-10) throw PreconditionError("gaussian_unitary_test: input must be even");
  const double dev = wick_deviation(choi_state(u));
  return {dev, dev <= kVerdictTol};
}

StateTest displaced_state_test(const DenseOp& rho, double coeff) {
  require_oracle_size(rho.n() + 1, kOracleMaxPairQubits, "displaced_state_test");
  require_state(rho, "displaced_state_test");
  require_pure(rho, "displaced_state_test");
  return gaussian_state_test(embed_dense(rho), coeff);
}

UnitaryTest displaced_unitary_test(const DenseOp& u) {
  require_oracle_size(u.n() + 1, kOracleMaxPairQubits, "displaced_unitary_test");
  require_unitary(u, "displaced_unitary_test");
  const DenseOp lifted = conjugate(embed_V(u.n()), tensor(u, DenseOp::identity(1)));
  return gaussian_unitary_test(lifted);
}

}  // namespace dgsim
