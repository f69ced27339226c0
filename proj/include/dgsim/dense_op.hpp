#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dgsim/antisym.hpp"

namespace dgsim {

// hard caps on the exponential-size reference paths
inline constexpr int kOracleMaxQubits = 6;      // single-register operations
inline constexpr int kOracleMaxPairQubits = 4;  // n for operations on 2n qubits
inline constexpr int kDenseMaxQubits = 2 * kOracleMaxPairQubits;

void require_oracle_size(int qubits, int cap, const char* what);

// 2ⁿ×2ⁿ complex operator. Qubit 1 is the most significant bit of the basis index.
class DenseOp {
 public:
  DenseOp() = default;
  DenseOp(int n, CMat m);
  static DenseOp identity(int n);
  static DenseOp zero(int n);
  static DenseOp from_vector(int n, const Eigen::VectorXcd& psi);

  int n() const { return n_; }
  Eigen::Index size() const { return m_.rows(); }
  const CMat& mat() const { return m_; }

  DenseOp adjoint() const { return DenseOp(n_, m_.adjoint()); }
  cplx trace() const { return m_.trace(); }
  DenseOp operator*(const DenseOp& o) const;
  DenseOp operator+(const DenseOp& o) const;
  DenseOp operator*(cplx s) const { return DenseOp(n_, m_ * s); }

 private:
  int n_ = 0;
  CMat m_;
};

// Majorana subset J ⊂ [2n] encoded as a bitmask: bit j-1 set iff j ∈ J
using SubsetMask = std::uint64_t;

SubsetMask subset_mask(std::span<const int> J);
std::vector<int> subset_indices(SubsetMask mask);

// A_J = Tr(γ_J† A) for all 4ⁿ subsets, indexed by SubsetMask
class MomentTable {
 public:
  MomentTable(int n, std::vector<cplx> values);

  int n() const { return n_; }
  cplx at(std::span<const int> J) const;
  cplx operator[](SubsetMask mask) const { return values_[mask]; }
  const std::vector<cplx>& values() const { return values_; }

 private:
  int n_;
  std::vector<cplx> values_;
};

}  // namespace dgsim
