#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dgsim/gaussian_state.hpp"
#include "dgsim/gaussian_unitary.hpp"

namespace dgsim {

using Bloch = std::array<double, 3>;

struct Preparation {
  DiagonalSpec diagonal;
  std::vector<Gate> gates;
};

// Line-1 synthesis followed by a fermionic-swap chain into place, one factor at a time.
// A product is displaced Gaussian iff every line with a transverse Bloch component is
// preceded only by pure lines; other inputs raise PreconditionError.
Preparation product_preparation(std::span<const Bloch> blochs);
DGaussState prepare_product(std::span<const Bloch> blochs);

// O(K, x) = Π_j (I + (-1)^{x_j} Z_{K_j}) / 2
class MeasurementOp {
 public:
  MeasurementOp(std::vector<int> lines, std::vector<int> bits);
  const std::vector<int>& lines() const { return lines_; }
  const std::vector<int>& bits() const { return bits_; }

 private:
  std::vector<int> lines_;
  std::vector<int> bits_;
};

// real carrier of Σ(K, x): blocks [[0, -(-1)^x], [(-1)^x, 0]] on subspaces (2K_j-1, 2K_j)
AntisymMat measurement_cov(int n, const MeasurementOp& m);

// 2^{-k} sqrt(det(I - M_ρ M_{K,x})), evaluated on the 2k measured subspaces
double expectation(const DGaussState& s, const MeasurementOp& m);

// Tr(ρσ) = 2^{-n} sqrt(det(I - M_ρ M_σ)); σ must be even
double overlap(const DGaussState& rho, const DGaussState& sigma);

struct ProductInput {
  std::vector<Bloch> blochs;
};
using CircuitInput = std::variant<DiagonalSpec, ProductInput, DGaussState>;

struct ExpectationMode {
  std::vector<int> x;
};
struct SampleMode {
  std::int64_t shots = 1;
  std::uint64_t seed = 0;
};

struct Circuit {
  int n = 0;
  CircuitInput input = DiagonalSpec({});
  std::vector<Gate> gates;
  std::vector<int> lines;
  std::variant<ExpectationMode, SampleMode> mode = ExpectationMode{};
};

void check_circuit(const Circuit& c);
DGaussState initial_state(const Circuit& c);
// gates in order, O(n) per plane rotation
DGaussState evolve(const DGaussState& s, std::span<const Gate> gates);
DGaussState run(const Circuit& c);

std::uint64_t splitmix64(std::uint64_t x);

// Chain rule over joint probabilities. Shot i draws from mt19937_64 seeded with
// splitmix64(seed + i), so any partition of the shot range reproduces the sequential list.
std::vector<std::string> sample(const DGaussState& s, std::span<const int> K, std::int64_t shots, std::uint64_t seed);
std::vector<std::string> sample_range(const DGaussState& s, std::span<const int> K, std::int64_t first,
                                      std::int64_t count, std::uint64_t seed);

}  // namespace dgsim
