#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dgsim/antisym.hpp"
#include "dgsim/gaussian_state.hpp"

namespace dgsim {

struct Generator {
  AntisymMat h;
  Vec d;
};

// 2·[[h, -d], [dᵀ, 0]]
AntisymMat lie_embed(const AntisymMat& h, const Vec& d);

// U = exp(½ γᵀhγ + i dᵀγ), acting on extended matrices by M̃ -> R M̃ Rᵀ with
// R = exp(lie_embed(h, d)).
class DGUnitary {
 public:
  DGUnitary(AntisymMat h, Vec d);
  static DGUnitary from_rotation(Rotation r);
  static DGUnitary identity(int n);

  int n() const { return n_; }
  const Rotation& rotation() const { return r_; }
  bool has_generator() const { return gen_.has_value(); }
  // stored generator, else the principal logarithm of the rotation
  Generator generator() const;

 private:
  DGUnitary(int n, Rotation r, std::optional<Generator> gen);
  int n_;
  Rotation r_;
  std::optional<Generator> gen_;
};

const Rotation& rotation(const DGUnitary& u);
DGaussState conjugate_state(const DGUnitary& u, const DGaussState& s);
// U₁U₂, i.e. U₂ acts first
DGUnitary compose(const DGUnitary& u1, const DGUnitary& u2);

// U γ_J U† = Σ_K c_K γ_K
using MonomialMap = std::map<std::vector<int>, cplx>;
MonomialMap conjugate_monomial(const DGUnitary& u, std::span<const int> J, std::size_t budget = 1u << 20);

// Plane rotation (j, k, θ) between two Majorana axes of one line or two adjacent lines;
// U = exp(θ/2 γ_j γ_k).
struct Matchgate {
  PlaneRotation plane;
};
// Plane rotation with axes in {1, 2, 2n+1}. (1, 2n+1, θ) is R_X(θ) on line 1,
// (2, 2n+1, θ) is R_Y(θ), and (1, 2, θ) is R_Z(-θ).
struct Line1Gate {
  PlaneRotation plane;
};
// fermionic swap of lines (line, line+1)
struct FSwap {
  int line;
};
using Gate = std::variant<Matchgate, Line1Gate, FSwap>;

struct GateSequence {
  int n = 0;
  std::vector<Gate> gates;
};

bool matchgate_axes(int j, int k, int n);
bool line1_axes(int j, int k, int n);
void check_gate(const Gate& g, int n);

// standard R_X, R_Y, R_Z(θ) on line 1
Line1Gate line1_rotation(char axis, double theta, int n);

Rotation gate_rotation(const Gate& g, int n);
// left-multiply an extended matrix: X <- R_g X, then right by R_gᵀ when both is set
void apply_gate(const Gate& g, Mat& x, bool both_sides);

// 4×4 rotation of fswap on subspaces 2a-1 .. 2a+2
const Mat& fswap_block();

// Factor R ∈ SO(2n+1) into matchgates and line-1 gates, at most (2n+1)(n+1) of them.
GateSequence compile(const Rotation& r);
Mat sequence_rotation(const GateSequence& seq);

}  // namespace dgsim
