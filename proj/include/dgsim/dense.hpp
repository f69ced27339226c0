#pragma once

#include <numbers>
#include <span>
#include <string>

#include "dgsim/dense_op.hpp"
#include "dgsim/gaussian_unitary.hpp"

namespace dgsim {

DenseOp majorana(int n, int j);
// γ_J = γ_{J1} γ_{J2} ... for a strictly increasing J
DenseOp monomial(int n, std::span<const int> J);

MomentTable moments(const DenseOp& a);
// 2^{-n} Σ_J A_J γ_J
DenseOp from_moments(const MomentTable& t);

// exp(½ Σ h_jk γ_j γ_k + i Σ d_j γ_j)
DenseOp exp_quadratic(int n, const AntisymMat& h, const Vec& d);

// coefficient of the beam-splitter exponent; π/4 gives a full mode swap
inline constexpr double kBeamSplitter = std::numbers::pi / 8;

// exp(coeff Σ_j γ_j γ_{2n+j}) on 2n qubits
DenseOp conv_unitary(int n, double coeff = kBeamSplitter);
// Tr₂[W (ρ⊗σ) W†] for even ρ, σ
DenseOp fermionic_convolution(const DenseOp& rho, const DenseOp& sigma, double coeff = kBeamSplitter);

DenseOp fswap(int n, int a, int b);
// exp(-iπ/4 γ_{2n+2}) on n+1 qubits
DenseOp embed_V(int n);
// even pure state on 2n qubits pairing mode j with mode 2n+j
DenseOp max_entangled(int n);
Mat max_entangled_covariance(int n);

// Tr[O(K, x) ρ] with O(K, x) = Π (I + (-1)^{x_j} Z_{K_j}) / 2
double born_probability(const DenseOp& rho, std::span<const int> K, std::span<const int> x);

DenseOp tensor(const DenseOp& a, const DenseOp& b);
// trace out the last `traced` qubits
DenseOp partial_trace(const DenseOp& a, int traced);
// max-entry distance after the best global phase alignment
double projective_distance(const DenseOp& u, const DenseOp& v);
double max_abs_diff(const DenseOp& a, const DenseOp& b);

// parity P = Z^{⊗n}; an operator is even iff it commutes with P
DenseOp parity(int n);
double odd_part_norm(const DenseOp& a);

// states: Hermitian and trace 1 to 1e-10, eigenvalues >= -1e-9
void require_state(const DenseOp& rho, const char* what);
void require_unitary(const DenseOp& u, const char* what);
double dense_purity(const DenseOp& rho);

// M̃ with M_jk = Tr(iγ_jγ_k ρ) and μ_j = Tr(γ_j ρ)
Mat extended_covariance(const DenseOp& rho);
// max over all J of |Tr(γ_J†ρ) - Wick(J)| with Wick built from ρ's own M̃
double wick_deviation(const DenseOp& rho);

DenseOp gate_unitary(const Gate& g, int n);
DenseOp sequence_unitary(const GateSequence& seq);
DenseOp conjugate(const DenseOp& u, const DenseOp& a);

}  // namespace dgsim
