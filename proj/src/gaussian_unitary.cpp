#include "dgsim/gaussian_unitary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "dgsim/error.hpp"

namespace dgsim {

namespace {

int line_of(int j) { return (j + 1) / 2; }

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};

// α_J = i^{|J| mod 2}
cplx alpha(std::size_t size) { return size % 2 ? cplx(0, 1) : cplx(1, 0); }

}  // namespace

AntisymMat lie_embed(const AntisymMat& h, const Vec& d) {
  const auto m = h.dim();
  if (m % 2 != 0 || d.size() != m) throw DimensionError("generator needs 2n×2n h and 2n-vector d");
  Mat g = Mat::Zero(m + 1, m + 1);
  g.topLeftCorner(m, m) = 2.0 * h.mat();
  g.col(m).head(m) = -2.0 * d;
  g.row(m).head(m) = 2.0 * d.transpose();
  return AntisymMat(std::move(g));
}

DGUnitary::DGUnitary(int n, Rotation r, std::optional<Generator> gen)
    : n_(n), r_(std::move(r)), gen_(std::move(gen)) {}

DGUnitary::DGUnitary(AntisymMat h, Vec d)
    : n_(static_cast<int>(h.dim() / 2)), r_(expm_antisym(lie_embed(h, d))), gen_(Generator{std::move(h), std::move(d)}) {}

DGUnitary DGUnitary::from_rotation(Rotation r) {
  if (r.dim() % 2 == 0) throw DimensionError("displaced Gaussian rotations act on 2n+1 subspaces");
  const int n = static_cast<int>(r.dim() / 2);
  return DGUnitary(n, std::move(r), std::nullopt);
}

DGUnitary DGUnitary::identity(int n) { return DGUnitary(n, Rotation::identity(2 * n + 1), std::nullopt); }

Generator DGUnitary::generator() const {
  if (gen_) return *gen_;
  const Mat g = logm_rotation(r_).mat();
  const auto m = 2 * n_;
  return Generator{AntisymMat(0.5 * g.topLeftCorner(m, m)), 0.5 * g.row(m).head(m).transpose()};
}

const Rotation& rotation(const DGUnitary& u) { return u.rotation(); }

DGaussState conjugate_state(const DGUnitary& u, const DGaussState& s) {
  if (u.n() != s.n()) throw DimensionError("unitary and state act on different qubit counts");
  const Mat& r = u.rotation().mat();
  Mat mt = r * s.extended() * r.transpose();
  return DGaussState::trusted(0.5 * (mt - mt.transpose()));
}

DGUnitary compose(const DGUnitary& u1, const DGUnitary& u2) {
  if (u1.n() != u2.n()) throw DimensionError("cannot compose unitaries on different qubit counts");
  return DGUnitary::from_rotation(u1.rotation() * u2.rotation());
}

MonomialMap conjugate_monomial(const DGUnitary& u, std::span<const int> J, std::size_t budget) {
  const int n = u.n();
  const int big = 2 * n + 1;
  for (std::size_t a = 0; a < J.size(); ++a) {
    if (J[a] < 1 || J[a] > 2 * n) throw IndexError("monomial index out of range");
    if (a > 0 && J[a] <= J[a - 1]) throw IndexError("monomial indices must be strictly increasing");
  }
  std::vector<int> jt(J.begin(), J.end());
  if (jt.size() % 2 == 1) jt.push_back(big);
  const auto t = static_cast<int>(jt.size());

  double count = 1.0;
  for (int a = 0; a < t; ++a) count = count * (big - a) / (a + 1);
  if (count > static_cast<double>(budget)) {
    std::ostringstream os;
    os << "conjugate_monomial would produce " << count << " terms (budget " << budget << ")";
    throw BudgetError(os.str());
  }

  const Mat& r = u.rotation().mat();
  MonomialMap out;
  std::vector<int> kt(t);
  for (int a = 0; a < t; ++a) kt[a] = a + 1;
  Mat minor(t, t);
  while (true) {
    for (int a = 0; a < t; ++a)
      for (int b = 0; b < t; ++b) minor(a, b) = r(kt[a] - 1, jt[b] - 1);
    const double det = t == 0 ? 1.0 : minor.determinant();
    std::vector<int> K(kt.begin(), kt.end());
    if (!K.empty() && K.back() == big) K.pop_back();
    out[K] = alpha(J.size()) / alpha(K.size()) * det;
    int a = t - 1;
    while (a >= 0 && kt[a] == big - (t - 1 - a)) --a;
    if (a < 0) break;
    ++kt[a];
    for (int b = a + 1; b < t; ++b) kt[b] = kt[b - 1] + 1;
  }
  return out;
}

bool matchgate_axes(int j, int k, int n) {
  if (j == k || j < 1 || k < 1 || j > 2 * n || k > 2 * n) return false;
  return std::abs(line_of(j) - line_of(k)) <= 1;
}

bool line1_axes(int j, int k, int n) {
  const int big = 2 * n + 1;
  auto ok = [&](int a) { return a == 1 || a == 2 || a == big; };
  return j != k && n >= 1 && ok(j) && ok(k);
}

void check_gate(const Gate& g, int n) {
  std::visit(overloaded{
                 [&](const Matchgate& m) {
                   if (!matchgate_axes(m.plane.j, m.plane.k, n)) {
                     std::ostringstream os;
                     os << "matchgate axes (" << m.plane.j << ", " << m.plane.k << ") are not within adjacent lines";
                     throw IndexError(os.str());
                   }
                 },
                 [&](const Line1Gate& l) {
                   if (!line1_axes(l.plane.j, l.plane.k, n)) {
                     std::ostringstream os;
                     os << "line-1 gate axes (" << l.plane.j << ", " << l.plane.k << ") are not within {1, 2, "
                        << 2 * n + 1 << "}";
                     throw IndexError(os.str());
                   }
                 },
                 [&](const FSwap& f) {
                   if (f.line < 1 || f.line + 1 > n) throw IndexError("fswap lines out of range");
                 },
             },
             g);
}

Line1Gate line1_rotation(char axis, double theta, int n) {
  const int big = 2 * n + 1;
  switch (axis) {
    case 'x': return {PlaneRotation(1, big, theta)};
    case 'y': return {PlaneRotation(2, big, theta)};
    case 'z': return {PlaneRotation(1, 2, -theta)};
    default: throw PreconditionError(std::string("unknown rotation axis '") + axis + "'");
  }
}

const Mat& fswap_block() {
  static const Mat block = [] {
    const double q = std::numbers::pi / 4;
    Mat h = Mat::Zero(4, 4);
    h(0, 3) = q;
    h(1, 2) = -q;
    h(0, 1) = -q;
    h(2, 3) = -q;
    h -= h.transpose().eval();
    Mat r = expm_antisym(AntisymMat(2.0 * h)).mat();
    // a signed permutation; snap the rounding noise
    for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = std::round(r.data()[i]);
    return r;
  }();
  return block;
}

Rotation gate_rotation(const Gate& g, int n) {
  check_gate(g, n);
  Mat r = Mat::Identity(2 * n + 1, 2 * n + 1);
  apply_gate(g, r, false);
  return Rotation::trusted(std::move(r));
}

void apply_gate(const Gate& g, Mat& x, bool both_sides) {
  std::visit(overloaded{
                 [&](const FSwap& f) {
                   const Mat& b = fswap_block();
                   const Eigen::Index r0 = 2 * (f.line - 1);
                   x.middleRows(r0, 4) = (b * x.middleRows(r0, 4)).eval();
                   if (both_sides) x.middleCols(r0, 4) = (x.middleCols(r0, 4) * b.transpose()).eval();
                 },
                 [&](const auto& plane_gate) {
                   plane_gate.plane.apply_left(x);
                   if (both_sides) plane_gate.plane.apply_right_transpose(x);
                 },
             },
             g);
}

GateSequence compile(const Rotation& r) {
  if (r.dim() % 2 == 0) throw DimensionError("compile expects a rotation on 2n+1 subspaces");
  const int n = static_cast<int>(r.dim() / 2);
  const int big = 2 * n + 1;
  auto allowed = [n](int j, int k) { return matchgate_axes(j, k, n) || line1_axes(j, k, n); };
  GateSequence seq{n, {}};
  for (const auto& p : plane_decompose(r, allowed)) {
    if (p.j == big || p.k == big) seq.gates.emplace_back(Line1Gate{p});
    else seq.gates.emplace_back(Matchgate{p});
  }
  return seq;
}

Mat sequence_rotation(const GateSequence& seq) {
  Mat r = Mat::Identity(2 * seq.n + 1, 2 * seq.n + 1);
  for (const auto& g : seq.gates) {
    check_gate(g, seq.n);
    apply_gate(g, r, false);
  }
  return r;
}

}  // namespace dgsim
