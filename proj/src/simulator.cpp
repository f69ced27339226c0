#include "dgsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "dgsim/error.hpp"

namespace dgsim {

namespace {

constexpr double kDetClamp = 1e-10;
constexpr double kCondSlack = 1e-9;

double norm3(const Bloch& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }
bool transverse(const Bloch& r) { return std::hypot(r[0], r[1]) > 1e-12; }

void check_lines(std::span<const int> K, int n) {
  for (std::size_t a = 0; a < K.size(); ++a) {
    if (K[a] < 1 || K[a] > n) {
      std::ostringstream os;
      os << "measured line " << K[a] << " outside [1, " << n << "]";
      throw IndexError(os.str());
    }
    if (a > 0 && K[a] <= K[a - 1]) throw IndexError("measured lines must be strictly increasing");
  }
}

double clamped_sqrt_det(const Mat& a) {
  double det = a.rows() == 0 ? 1.0 : a.partialPivLu().determinant();
  if (det < 0) {
    if (det < -kDetClamp) {
      std::ostringstream os;
      os << "negative determinant " << det << " (inadmissible state upstream)";
      throw NumericalError(os.str());
    }
    det = 0;
  }
  return std::sqrt(det);
}

}  // namespace

Preparation product_preparation(std::span<const Bloch> blochs) {
  const int n = static_cast<int>(blochs.size());
  for (const auto& r : blochs) {
    if (norm3(r) > 1.0 + 1e-9) throw PreconditionError("Bloch vector longer than 1");
  }
  bool prefix_pure = true;
  for (int q = 0; q < n; ++q) {
    if (transverse(blochs[q]) && !prefix_pure) {
      std::ostringstream os;
      os << "product is not displaced Gaussian: line " << q + 1
         << " has a transverse Bloch component after a mixed line";
      throw PreconditionError(os.str());
    }
    prefix_pure = prefix_pure && std::abs(norm3(blochs[q]) - 1.0) <= 1e-9;
  }

  // line j starts with the polarization of factor n+1-j
  std::vector<double> lambdas(n);
  for (int j = 1; j <= n; ++j) {
    const Bloch& r = blochs[n - j];
    lambdas[j - 1] = transverse(r) ? std::min(1.0, norm3(r)) : std::clamp(r[2], -1.0, 1.0);
  }
  std::vector<Gate> gates;
  for (int q = n; q >= 1; --q) {
    const Bloch& r = blochs[q - 1];
    if (transverse(r)) {
      const double len = norm3(r);
      const double theta = std::acos(std::clamp(r[2] / len, -1.0, 1.0));
      const double phi = std::atan2(r[1], r[0]);
      gates.emplace_back(line1_rotation('y', theta, n));
      gates.emplace_back(line1_rotation('z', phi, n));
    }
    for (int a = 1; a < q; ++a) gates.emplace_back(FSwap{a});
  }
  return {DiagonalSpec(std::move(lambdas)), std::move(gates)};
}

DGaussState prepare_product(std::span<const Bloch> blochs) {
  const auto prep = product_preparation(blochs);
  return evolve(from_diagonal(prep.diagonal), prep.gates);
}

MeasurementOp::MeasurementOp(std::vector<int> lines, std::vector<int> bits)
    : lines_(std::move(lines)), bits_(std::move(bits)) {
  if (lines_.size() != bits_.size()) throw DimensionError("bitstring length must match the line subset");
  for (std::size_t a = 0; a < lines_.size(); ++a) {
    if (lines_[a] < 1) throw IndexError("lines are 1-based");
    if (a > 0 && lines_[a] <= lines_[a - 1]) throw IndexError("measured lines must be strictly increasing");
    if (bits_[a] != 0 && bits_[a] != 1) throw PreconditionError("bits must be 0 or 1");
  }
}

AntisymMat measurement_cov(int n, const MeasurementOp& m) {
  check_lines(m.lines(), n);
  Mat out = Mat::Zero(2 * n, 2 * n);
  for (std::size_t a = 0; a < m.lines().size(); ++a) {
    const int r = 2 * (m.lines()[a] - 1);
    const double l = m.bits()[a] ? -1.0 : 1.0;
    out(r, r + 1) = -l;
    out(r + 1, r) = l;
  }
  return AntisymMat(std::move(out));
}

double expectation(const DGaussState& s, const MeasurementOp& m) {
  check_lines(m.lines(), s.n());
  const auto k = static_cast<Eigen::Index>(m.lines().size());
  if (k == 0) return 1.0;
  const Mat& mt = s.extended();
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * k);
  for (int line : m.lines()) {
    idx.push_back(2 * (line - 1));
    idx.push_back(2 * (line - 1) + 1);
  }
  Mat a(2 * k, 2 * k);
  for (Eigen::Index r = 0; r < 2 * k; ++r)
    for (Eigen::Index c = 0; c < 2 * k; ++c) a(r, c) = mt(idx[r], idx[c]);
  // B is block diagonal, so column 2q of A·B is l·A[:, 2q+1] and column 2q+1 is -l·A[:, 2q]
  Mat ab(2 * k, 2 * k);
  for (Eigen::Index q = 0; q < k; ++q) {
    const double l = m.bits()[q] ? -1.0 : 1.0;
    ab.col(2 * q) = l * a.col(2 * q + 1);
    ab.col(2 * q + 1) = -l * a.col(2 * q);
  }
  const Mat id = Mat::Identity(2 * k, 2 * k);
  return std::ldexp(clamped_sqrt_det(id - ab), -static_cast<int>(k));
}

double overlap(const DGaussState& rho, const DGaussState& sigma) {
  if (rho.n() != sigma.n()) throw DimensionError("overlap of states on different qubit counts");
  if (!sigma.is_even(1e-10)) throw PreconditionError("overlap formula needs an even second argument");
  const int n = rho.n();
  const Mat id = Mat::Identity(2 * n, 2 * n);
  return std::ldexp(clamped_sqrt_det(id - rho.M() * sigma.M()), -n);
}

void check_circuit(const Circuit& c) {
  if (c.n < 1) throw DimensionError("circuit needs at least one qubit");
  for (const auto& g : c.gates) check_gate(g, c.n);
  check_lines(c.lines, c.n);
  std::visit(
      [&](const auto& mode) {
        using T = std::decay_t<decltype(mode)>;
        if constexpr (std::is_same_v<T, ExpectationMode>) {
          MeasurementOp(c.lines, mode.x);
        } else {
          if (mode.shots < 1) throw PreconditionError("shots must be at least 1");
        }
      },
      c.mode);
}

DGaussState initial_state(const Circuit& c) {
  DGaussState s = std::visit(
      [](const auto& in) -> DGaussState {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, DiagonalSpec>) return from_diagonal(in);
        else if constexpr (std::is_same_v<T, ProductInput>) return prepare_product(in.blochs);
        else return in;
      },
      c.input);
  if (s.n() != c.n) throw DimensionError("input state size does not match the circuit");
  return s;
}

DGaussState evolve(const DGaussState& s, std::span<const Gate> gates) {
  Mat mt = s.extended();
  for (const auto& g : gates) {
    check_gate(g, s.n());
    apply_gate(g, mt, true);
  }
  return DGaussState::trusted(std::move(mt));
}

DGaussState run(const Circuit& c) {
  check_circuit(c);
  return evolve(initial_state(c), c.gates);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::string> sample_range(const DGaussState& s, std::span<const int> K, std::int64_t first,
                                      std::int64_t count, std::uint64_t seed) {
  check_lines(K, s.n());
  if (first < 0 || count < 0) throw PreconditionError("shot range must be nonnegative");
  const std::size_t k = K.size();
  std::map<std::string, double> joint{{"", 1.0}};
  auto prob = [&](const std::string& prefix) {
    auto it = joint.find(prefix);
    if (it != joint.end()) return it->second;
    std::vector<int> lines(K.begin(), K.begin() + static_cast<std::ptrdiff_t>(prefix.size()));
    std::vector<int> bits;
    for (char b : prefix) bits.push_back(b - '0');
    const double p = expectation(s, MeasurementOp(std::move(lines), std::move(bits)));
    joint.emplace(prefix, p);
    return p;
  };

  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t shot = first; shot < first + count; ++shot) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(shot)));
    std::string prefix;
    prefix.reserve(k);
    for (std::size_t b = 0; b < k; ++b) {
      const double whole = prob(prefix);
      const double zero = prob(prefix + '0');
      double cond;
      if (whole <= 0.0) {
        cond = zero >= prob(prefix + '1') ? 1.0 : 0.0;
      } else {
        cond = zero / whole;
        if (cond < -kCondSlack || cond > 1.0 + kCondSlack) {
          std::ostringstream os;
          os << "conditional probability " << cond << " outside [0, 1]";
          throw NumericalError(os.str());
        }
        cond = std::clamp(cond, 0.0, 1.0);
      }
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      prefix += u < cond ? '0' : '1';
    }
    out.push_back(std::move(prefix));
  }
  return out;
}

std::vector<std::string> sample(const DGaussState& s, std::span<const int> K, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw PreconditionError("shots must be at least 1");
  return sample_range(s, K, 0, shots, seed);
}

}  // namespace dgsim
