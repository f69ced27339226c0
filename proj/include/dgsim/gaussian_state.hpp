#pragma once

#include <span>
#include <variant>
#include <vector>

#include "dgsim/antisym.hpp"
#include "dgsim/dense_op.hpp"

namespace dgsim {

// Per-line Z polarizations of ⊗ (1 + λ_j Z)/2.
class DiagonalSpec {
 public:
  explicit DiagonalSpec(std::vector<double> lambdas);
  const std::vector<double>& lambdas() const { return lambdas_; }
  int n() const { return static_cast<int>(lambdas_.size()); }

 private:
  std::vector<double> lambdas_;
};

// Displaced Gaussian state carried by the real extended matrix
//   M̃ = [[M, μ], [-μᵀ, 0]],  M_jk = ⟨iγ_jγ_k⟩,  μ_j = ⟨γ_j⟩,
// so that Σ̃ = i M̃. Under the literal Jordan-Wigner ordering iγ₁γ₂ = -Z, hence
// (1 + λZ)/2 on line j has M_{2j-1,2j} = -λ.
class DGaussState {
 public:
  DGaussState(const AntisymMat& m, const Vec& mu);
  static DGaussState from_extended(const AntisymMat& mt);
  // no admissibility check; for states produced by exact rotations of valid ones
  static DGaussState trusted(Mat mt);

  int n() const { return n_; }
  const Mat& extended() const { return mt_; }
  Mat M() const { return mt_.topLeftCorner(2 * n_, 2 * n_); }
  Vec mu() const { return mt_.col(2 * n_).head(2 * n_); }
  CMat sigma_tilde() const { return cplx(0, 1) * mt_.cast<cplx>(); }
  bool is_even(double tol = 1e-12) const;

 private:
  DGaussState() = default;
  int n_ = 0;
  Mat mt_;
};

DGaussState from_diagonal(const DiagonalSpec& spec);

// Tr(γ_J† ρ) = (-i)^{|J| mod 2} Pf[(iM̃)|J̃], J̃ = J ∪ {2n+1} for odd |J|
cplx wick_moment(const DGaussState& s, std::span<const int> J);
cplx wick_moment(const Mat& mt, std::span<const int> J);

struct Validation {
  bool valid = false;
  bool pure = false;
  std::vector<double> lambdas;
  int rank = 0;
};

// admissible iff every canonical |λ| <= 1 + 1e-9; pure iff all n of them are 1 within 1e-7
Validation validate(const AntisymMat& mt);
// same check on Σ̃ = iM̃ given in complex form
Validation validate(const CMat& sigma_tilde);

// R M̃ Rᵀ = ⊕ [[0, -λ_j], [λ_j, 0]] ⊕ 0 with λ_j >= 0 sorted descending
CanonicalForm state_canonical_form(const Mat& mt);

// e^{-H}/Tr e^{-H} for H = (i/2) Σ h_jk γ_jγ_k + Σ d_j γ_j
DGaussState from_thermal(const AntisymMat& h, const Vec& d);

struct ThermalGenerator {
  AntisymMat h;
  Vec d;
};
struct Saturation {
  // 1-based canonical modes with λ >= 1 - 1e-9
  std::vector<int> modes;
};
std::variant<ThermalGenerator, Saturation> to_thermal(const DGaussState& s);

double purity(const DGaussState& s);

DenseOp dense(const DGaussState& s);

}  // namespace dgsim
