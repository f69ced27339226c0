#pragma once

#include <vector>

#include "dgsim/dense.hpp"
#include "dgsim/gaussian_state.hpp"
#include "dgsim/gaussian_unitary.hpp"

namespace dgsim {

struct EmbeddingResult {
  // real carrier of Σ[E(ρ)]: [[M, -r, μ], [rᵀ, 0, c], [-μᵀ, -c, 0]]
  AntisymMat sigma;
  Vec r;
  double c = 0.0;
};

// (r, c) is the last row of the rotation R with R M̃ Rᵀ = ⊕ [[0, -λ], [λ, 0]] ⊕ 0, λ >= 0.
// Exact for pure inputs.
EmbeddingResult embedding(const DGaussState& s);
DGaussState embed_state(const DGaussState& s);

// Second moments of E(ρ) for any state: corner (-1)^n Pf(M) and
// column (-1)^{n+j+1} Pf(M̃ without j). Agrees with embedding() on pure states.
Mat embedded_covariance(const DGaussState& s);

// h̃ = [[h, 0, -d], [0, 0, 0], [dᵀ, 0, 0]]
AntisymMat embed_unitary(const DGUnitary& u);

struct QubitGate {
  enum class Kind { A, Adg, Sdg, CX };
  Kind kind;
  int target;
  int control = 0;
};

// A = S†H on line n+1: A†, CX fan-in, S†, CX fan-in, A in time order
std::vector<QubitGate> embed_V_gates(int n);
DenseOp qubit_circuit_unitary(int qubits, const std::vector<QubitGate>& gates);

// V (ρ ⊗ |+⟩⟨+|) V†
DenseOp embed_dense(const DenseOp& rho);
// (U ⊗ I) ρ_E (U† ⊗ I)
DenseOp choi_state(const DenseOp& u);

struct StateTest {
  double overlap = 0.0;
  bool gaussian = false;
};
struct UnitaryTest {
  double deviation = 0.0;
  bool gaussian = false;
};

inline constexpr double kVerdictTol = 1e-7;

// Tr[ψ (ψ ⊠ ψ)] for an even pure density matrix; Gaussian iff >= 1 - 1e-7
StateTest gaussian_state_test(const DenseOp& psi, double coeff = kBeamSplitter);
// Wick consistency of the Choi state of an even unitary
UnitaryTest gaussian_unitary_test(const DenseOp& u);
// pure inputs only
StateTest displaced_state_test(const DenseOp& rho, double coeff = kBeamSplitter);
UnitaryTest displaced_unitary_test(const DenseOp& u);

}  // namespace dgsim
